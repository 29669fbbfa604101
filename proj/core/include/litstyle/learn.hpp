#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace litstyle {

// ---------------------------------------------------------------------------
// Feature tables

struct FeatureRow {
  std::string id;
  std::vector<double> values;  // NaN marks a missing measure
  std::size_t label = 0;       // index into FeatureTable::class_names
};

struct FeatureTable {
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  std::vector<FeatureRow> rows;

  std::size_t num_features() const { return feature_names.size(); }
  std::size_t num_classes() const { return class_names.size(); }
};

struct CompletionReport {
  std::vector<std::string> dropped_features;
  std::vector<std::string> dropped_rows;
  std::vector<std::string> dropped_classes;
};

// Drops features that are missing in every row, then rows that still have a
// missing value, then classes left without rows (labels are renumbered).
FeatureTable complete_cases(const FeatureTable& table, CompletionReport* report = nullptr);

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;  // 1 for constant features

  static Standardizer fit(const FeatureTable& table, std::span<const std::size_t> rows);
  std::vector<double> apply(std::span<const double> values) const;
};

// ---------------------------------------------------------------------------
// Network

struct MlpConfig {
  std::size_t hidden1 = 100;  // tanh
  std::size_t hidden2 = 25;   // identity
  double l2_lambda = 0.01;    // squared-weight penalty (biases excluded)
  std::size_t tours = 10;
  std::size_t max_epochs = 2000;
  double learning_rate = 0.1;
  double momentum = 0.9;
  double tolerance = 1e-8;    // relative loss change that ends a tour
  std::uint64_t seed = 1;
  std::size_t jobs = 1;       // threads used for tours
};

// in -> hidden1 (tanh) -> hidden2 (identity) -> classes (softmax).
struct Network {
  Eigen::MatrixXd w1, w2, w3;  // rows = outputs of the layer
  Eigen::VectorXd b1, b2, b3;

  static Network init(std::size_t inputs, std::size_t classes, const MlpConfig& config,
                      std::uint64_t seed);

  // Row-wise class probabilities for the rows of `x`.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  // Mean cross-entropy plus (lambda / 2) * sum of squared weights.
  double loss(const Eigen::MatrixXd& x, std::span<const std::size_t> labels, double lambda) const;

  // Gradient of loss() in the same layout as the network.
  Network gradient(const Eigen::MatrixXd& x, std::span<const std::size_t> labels,
                   double lambda) const;

  // Flat views for optimizers and finite-difference checks.
  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);
};

struct MlpModel {
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  Standardizer scaler;
  Network network;
  std::size_t best_tour = 0;
  double penalized_loss = 0.0;
  std::vector<double> loss_history;  // accepted steps of the kept tour
};

// Trains `config.tours` seeded restarts of full-batch momentum gradient
// descent and keeps the one with the lowest penalized training loss. Uses
// `rows` (all rows when empty). Throws Errc::invalid_argument when the rows
// cover fewer than 2 classes, Errc::divergence on a non-finite initial loss.
MlpModel train_mlp(const FeatureTable& table, const MlpConfig& config,
                   std::span<const std::size_t> rows = {});

std::vector<double> predict_proba(const MlpModel& model, std::span<const double> row);
Eigen::MatrixXd predict_proba(const MlpModel& model, const FeatureTable& table,
                              std::span<const std::size_t> rows);

// Lowest index wins ties.
std::size_t argmax(std::span<const double> values);

std::string mlp_model_to_json(const MlpModel& model);

// ---------------------------------------------------------------------------
// Evaluation

struct Importances {
  std::vector<double> overall;                 // per feature, in [0, 1]
  std::vector<std::vector<double>> per_class;  // [class][feature], in [0, 1]
  std::vector<double> raw_overall;             // mean accuracy drop
  std::vector<std::vector<double>> raw_per_class;
};

// Permutation importance on the given rows: for each feature, the accuracy
// drop averaged over `repeats` seeded shuffles of that column, divided by the
// largest drop. Per-class values use one-vs-rest accuracy. Throws
// Errc::config when repeats == 0.
Importances feature_importance(const MlpModel& model, const FeatureTable& table,
                               std::span<const std::size_t> rows, std::uint64_t seed,
                               std::size_t repeats = 10);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// One-vs-rest ROC curve of a score over threshold groups, from (0,0) to (1,1).
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const bool> positive);
double auc(std::span<const RocPoint> curve);

struct EvalReport {
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  std::vector<std::vector<std::size_t>> confusion_counts;  // [true][predicted]
  std::vector<std::vector<double>> confusion;              // row-normalized
  double misclassification = 0.0;
  std::vector<double> auc;
  std::vector<std::vector<RocPoint>> roc;
  double r2_entropy = 0.0;
  Importances importances;
  std::vector<std::size_t> fold_of_row;
  std::vector<std::size_t> evaluated_rows;
  Eigen::MatrixXd probabilities;  // rows parallel to evaluated_rows
  std::vector<std::string> warnings;
};

struct CvOptions {
  std::size_t k = 5;
  std::uint64_t seed = 1;
  bool stratified = true;
  std::size_t importance_repeats = 10;
  // Evaluate only the first fold as a held-out validation split.
  bool single_split = false;
  std::size_t jobs = 1;  // threads across folds
};

// Stratified seeded fold assignment. Classes with fewer than k rows are
// pooled into one stratum (and named in `warnings`).
std::vector<std::size_t> assign_folds(const FeatureTable& table, std::size_t k, std::uint64_t seed,
                                      bool stratified, std::vector<std::string>* warnings = nullptr);

// Pooled out-of-fold evaluation. Training rows are standardized with their
// own statistics; the fold's model is trained with a seed derived from
// (seed, fold).
EvalReport kfold_cv(const FeatureTable& table, const MlpConfig& config, const CvOptions& options = {});

struct FootprintPoint {
  std::string feature;
  double importance = 0.0;
};

// Per-class importance profile; throws Errc::invalid_argument for an unknown
// group.
std::vector<FootprintPoint> footprint(const EvalReport& report, std::string_view group);

std::string eval_report_to_json(const EvalReport& report);
void write_confusion_csv(std::ostream& out, const EvalReport& report);
void write_importances_csv(std::ostream& out, const EvalReport& report);
void write_roc_csv(std::ostream& out, const EvalReport& report);
void write_footprints_csv(std::ostream& out, const EvalReport& report);

}  // namespace litstyle
