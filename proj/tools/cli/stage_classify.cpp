#include <algorithm>
#include <ostream>
#include <sstream>

#include "litstyle/error.hpp"
#include "litstyle/learn.hpp"
#include "stages.hpp"

namespace litstyle::cli::detail {

namespace {

const std::vector<std::string> kFeatures = {"ITV", "SWD", "FF", "HARM", "VARI"};

struct Task {
  std::string name;  // "category" or "authors/<category>"
  FeatureTable table;
};

FeatureTable table_from(const CsvTable& features, const std::string& label_column,
                        const std::string& only_category) {
  FeatureTable t;
  t.feature_names = kFeatures;
  const auto c_id = features.column("doc_id");
  const auto c_label = features.column(label_column);
  const auto c_cat = features.column("category");
  std::vector<std::size_t> cols;
  for (const auto& f : kFeatures) cols.push_back(features.column(f));
  for (const auto& row : features.rows) {
    if (!only_category.empty() && row[c_cat] != only_category) continue;
    FeatureRow r;
    r.id = row[c_id];
    for (auto col : cols) r.values.push_back(cell(row[col]));
    const auto it = std::find(t.class_names.begin(), t.class_names.end(), row[c_label]);
    r.label = static_cast<std::size_t>(it - t.class_names.begin());
    if (it == t.class_names.end()) t.class_names.push_back(row[c_label]);
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace

void run_classify(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path dir = stage_dir(ctx, Stage::classify);
  const CsvTable features = read_table(stage_dir(ctx, Stage::complexity) / "features.csv");

  MlpConfig mlp;
  mlp.hidden1 = c.get_size("hidden1");
  mlp.hidden2 = c.get_size("hidden2");
  mlp.l2_lambda = c.get_double("l2_lambda");
  mlp.tours = c.get_size("tours");
  mlp.max_epochs = c.get_size("max_epochs");
  mlp.learning_rate = c.get_double("learning_rate");
  mlp.seed = c.seed();
  mlp.jobs = ctx.jobs;
  CvOptions cv;
  cv.k = c.get_size("k_folds");
  cv.seed = c.seed();
  cv.stratified = c.get_bool("stratified");
  cv.importance_repeats = c.get_size("importance_repeats");
  cv.jobs = ctx.jobs;
  if (mlp.tours == 0) throw Error(Errc::config, "tours must be positive");
  if (cv.k < 2) throw Error(Errc::config, "k_folds must be at least 2");

  std::vector<Task> tasks;
  tasks.push_back({"category", table_from(features, "category", "")});
  for (Category cat : kAllCategories) {
    const std::string name(to_string(cat));
    tasks.push_back({"authors/" + name, table_from(features, "author", name)});
  }

  std::ostringstream summary_body;
  CsvWriter summary(summary_body);
  summary.row({"task", "rows", "classes", "features", "misclassification", "r2_entropy", "mean_auc",
               "status"});
  for (auto& task : tasks) {
    CompletionReport completion;
    FeatureTable table;
    std::string status;
    try {
      table = complete_cases(task.table, &completion);
    } catch (const Error& e) {
      status = std::string("skipped: ") + e.what();
    }
    // Class indices that lost every row are dropped by complete_cases, so the
    // class count here is what the classifier will see.
    if (status.empty() && table.num_classes() < 2) status = "skipped: fewer than 2 classes";
    if (status.empty() && table.rows.size() < cv.k) status = "skipped: fewer rows than folds";
    if (!status.empty()) {
      summary.field(task.name).field(table.rows.size()).field(table.num_classes())
          .field(table.num_features()).field("").field("").field("").field(status);
      summary.end_row();
      note(ctx, "[classify] " + task.name + " " + status);
      continue;
    }
    const fs::path tdir = dir / task.name;
    const EvalReport report = kfold_cv(table, mlp, cv);
    CvOptions single = cv;
    single.single_split = true;
    const EvalReport split = kfold_cv(table, mlp, single);
    const MlpModel model = train_mlp(table, mlp);

    write_file(tdir / "report.json", [&](std::ostream& o) { o << eval_report_to_json(report); });
    write_file(tdir / "single_split.json", [&](std::ostream& o) { o << eval_report_to_json(split); });
    write_file(tdir / "model.json", [&](std::ostream& o) { o << mlp_model_to_json(model); });
    write_file(tdir / "confusion.csv", [&](std::ostream& o) { write_confusion_csv(o, report); });
    write_file(tdir / "importances.csv", [&](std::ostream& o) { write_importances_csv(o, report); });
    write_file(tdir / "roc.csv", [&](std::ostream& o) { write_roc_csv(o, report); });
    write_file(tdir / "footprints.csv", [&](std::ostream& o) { write_footprints_csv(o, report); });
    write_file(tdir / "dropped.csv", [&](std::ostream& o) {
      CsvWriter csv(o);
      csv.row({"kind", "name"});
      for (const auto& f : completion.dropped_features) csv.field("feature").field(f).end_row();
      for (const auto& r : completion.dropped_rows) csv.field("row").field(r).end_row();
      for (const auto& k : completion.dropped_classes) csv.field("class").field(k).end_row();
    });
    for (const auto& w : report.warnings) note(ctx, "[classify] " + task.name + ": " + w);

    double mean_auc = 0.0;
    for (double a : report.auc) mean_auc += a;
    mean_auc /= static_cast<double>(report.auc.size());
    summary.field(task.name).field(table.rows.size()).field(table.num_classes()).field(table.num_features())
        .field(report.misclassification).field(report.r2_entropy).field(mean_auc).field("evaluated");
    summary.end_row();
  }
  write_file(dir / "summary.csv", [&](std::ostream& o) { o << summary_body.str(); });
}

}  // namespace litstyle::cli::detail
