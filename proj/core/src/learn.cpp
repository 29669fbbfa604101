#include "litstyle/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>

#include <nlohmann/json.hpp>

#include "litstyle/csv.hpp"
#include "litstyle/error.hpp"
#include "litstyle/parallel.hpp"
#include "litstyle/random.hpp"

namespace litstyle {

namespace {

constexpr double kProbFloor = 1e-15;

std::vector<std::size_t> all_rows(const FeatureTable& table) {
  std::vector<std::size_t> rows(table.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return rows;
}

Eigen::MatrixXd design_matrix(const FeatureTable& table, const Standardizer& scaler,
                              std::span<const std::size_t> rows) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(table.num_features()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& values = table.rows.at(rows[r]).values;
    if (values.size() != table.num_features()) {
      throw Error(Errc::dimension_mismatch, "row '" + table.rows[rows[r]].id + "' has " +
                                                std::to_string(values.size()) + " values, expected " +
                                                std::to_string(table.num_features()));
    }
    const auto z = scaler.apply(values);
    for (std::size_t j = 0; j < z.size(); ++j) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = z[j];
    }
  }
  return x;
}

std::vector<std::size_t> labels_of(const FeatureTable& table, std::span<const std::size_t> rows) {
  std::vector<std::size_t> labels;
  labels.reserve(rows.size());
  for (auto r : rows) labels.push_back(table.rows[r].label);
  return labels;
}

std::vector<std::size_t> predictions(const Eigen::MatrixXd& proba) {
  std::vector<std::size_t> out(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < proba.cols(); ++c) {
      if (proba(i, c) > proba(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return out;
}

// Softmax of each row of z, in place; returns per-row log-sum-exp.
Eigen::VectorXd softmax_rows(Eigen::MatrixXd& z) {
  Eigen::VectorXd lse(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    z.row(i).array() -= m;
    z.row(i) = z.row(i).array().exp().matrix();
    const double s = z.row(i).sum();
    z.row(i) /= s;
    lse(i) = m + std::log(s);
  }
  return lse;
}

double penalty(const Network& n) {
  return n.w1.squaredNorm() + n.w2.squaredNorm() + n.w3.squaredNorm();
}

// Per-epoch buffers. Reusing them keeps the training loop free of large
// allocations.
struct Workspace {
  Eigen::MatrixXd a1, a2, z3, d3, d2, d1;
  Eigen::VectorXd lse;
};

// tanh through the vectorized exp; saturates cleanly to +-1.
void tanh_in_place(Eigen::MatrixXd& m) {
  m = 1.0 - 2.0 / ((2.0 * m.array()).exp() + 1.0);
}

// Penalized loss, plus its gradient when `grad` is non-null.
double loss_and_gradient(const Network& n, const Eigen::MatrixXd& x,
                         std::span<const std::size_t> labels, double lambda, Network* grad,
                         Workspace& ws) {
  const auto rows = x.rows();
  if (rows == 0) throw Error(Errc::empty_input, "no rows to evaluate");
  if (static_cast<std::size_t>(rows) != labels.size()) {
    throw Error(Errc::dimension_mismatch, "label count does not match rows");
  }
  ws.a1.noalias() = x * n.w1.transpose();
  ws.a1.rowwise() += n.b1.transpose();
  tanh_in_place(ws.a1);
  ws.a2.noalias() = ws.a1 * n.w2.transpose();
  ws.a2.rowwise() += n.b2.transpose();
  ws.z3.noalias() = ws.a2 * n.w3.transpose();
  ws.z3.rowwise() += n.b3.transpose();

  double ce = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto y = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
    if (y >= ws.z3.cols()) throw Error(Errc::invalid_argument, "label out of range");
    ce -= ws.z3(i, y);
  }
  ws.lse = softmax_rows(ws.z3);
  ce += ws.lse.sum();
  const double inv_n = 1.0 / static_cast<double>(rows);
  const double loss = ce * inv_n + 0.5 * lambda * penalty(n);
  if (!grad) return loss;

  ws.d3 = ws.z3;
  for (Eigen::Index i = 0; i < rows; ++i) {
    ws.d3(i, static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) -= 1.0;
  }
  ws.d3 *= inv_n;
  grad->w3.noalias() = ws.d3.transpose() * ws.a2;
  grad->w3 += lambda * n.w3;
  grad->b3 = ws.d3.colwise().sum().transpose();
  ws.d2.noalias() = ws.d3 * n.w3;
  grad->w2.noalias() = ws.d2.transpose() * ws.a1;
  grad->w2 += lambda * n.w2;
  grad->b2 = ws.d2.colwise().sum().transpose();
  ws.d1.noalias() = ws.d2 * n.w2;
  ws.d1.array() *= 1.0 - ws.a1.array().square();
  grad->w1.noalias() = ws.d1.transpose() * x;
  grad->w1 += lambda * n.w1;
  grad->b1 = ws.d1.colwise().sum().transpose();
  return loss;
}

template <typename F>
void for_each_block(Network& n, F&& f) {
  f(n.w1.data(), n.w1.size());
  f(n.b1.data(), n.b1.size());
  f(n.w2.data(), n.w2.size());
  f(n.b2.data(), n.b2.size());
  f(n.w3.data(), n.w3.size());
  f(n.b3.data(), n.b3.size());
}

struct TourResult {
  Network network;
  double loss = 0.0;
  std::vector<double> history;
};

TourResult run_tour(const Eigen::MatrixXd& x, std::span<const std::size_t> labels,
                    std::size_t classes, const MlpConfig& config, std::uint64_t seed) {
  TourResult tour;
  tour.network = Network::init(static_cast<std::size_t>(x.cols()), classes, config, seed);
  Network& net = tour.network;
  Network grad = net;
  Workspace ws;
  double loss = loss_and_gradient(net, x, labels, config.l2_lambda, &grad, ws);
  if (!std::isfinite(loss)) throw Error(Errc::divergence, "initial loss is not finite");
  tour.history.push_back(loss);

  std::vector<double> params = net.parameters();
  std::vector<double> velocity(params.size(), 0.0);
  std::vector<double> trial(params.size());
  Network candidate = net;
  Network candidate_grad = net;
  double lr = config.learning_rate;
  const double lr_max = config.learning_rate * 10.0;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto g = grad.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
      velocity[i] = config.momentum * velocity[i] - lr * g[i];
      trial[i] = params[i] + velocity[i];
    }
    candidate.set_parameters(trial);
    const double next = loss_and_gradient(candidate, x, labels, config.l2_lambda, &candidate_grad, ws);
    if (std::isfinite(next) && next < loss) {
      const double rel = (loss - next) / std::max(std::abs(loss), 1e-300);
      std::swap(params, trial);
      std::swap(net, candidate);
      std::swap(grad, candidate_grad);
      loss = next;
      tour.history.push_back(loss);
      lr = std::min(lr * 1.05, lr_max);
      if (rel < config.tolerance) break;
    } else {
      std::fill(velocity.begin(), velocity.end(), 0.0);
      lr *= 0.5;
      if (lr < 1e-12) break;
    }
  }
  tour.loss = loss;
  return tour;
}

}  // namespace

// ---------------------------------------------------------------------------

FeatureTable complete_cases(const FeatureTable& table, CompletionReport* report) {
  const std::size_t f = table.num_features();
  for (const auto& row : table.rows) {
    if (row.values.size() != f) {
      throw Error(Errc::dimension_mismatch, "row '" + row.id + "' has the wrong number of values");
    }
  }
  std::vector<bool> keep_feature(f, false);
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < f; ++j) {
      if (!std::isnan(row.values[j])) keep_feature[j] = true;
    }
  }
  CompletionReport local;
  FeatureTable out;
  for (std::size_t j = 0; j < f; ++j) {
    if (keep_feature[j]) {
      out.feature_names.push_back(table.feature_names[j]);
    } else {
      local.dropped_features.push_back(table.feature_names[j]);
    }
  }
  std::vector<std::size_t> class_rows(table.num_classes(), 0);
  std::vector<FeatureRow> kept;
  for (const auto& row : table.rows) {
    FeatureRow r{row.id, {}, row.label};
    bool complete = true;
    for (std::size_t j = 0; j < f; ++j) {
      if (!keep_feature[j]) continue;
      if (std::isnan(row.values[j])) complete = false;
      r.values.push_back(row.values[j]);
    }
    if (!complete) {
      local.dropped_rows.push_back(row.id);
      continue;
    }
    ++class_rows.at(row.label);
    kept.push_back(std::move(r));
  }
  std::vector<std::size_t> relabel(table.num_classes(), 0);
  for (std::size_t c = 0; c < table.num_classes(); ++c) {
    if (class_rows[c] == 0) {
      local.dropped_classes.push_back(table.class_names[c]);
    } else {
      relabel[c] = out.class_names.size();
      out.class_names.push_back(table.class_names[c]);
    }
  }
  for (auto& r : kept) r.label = relabel[r.label];
  out.rows = std::move(kept);
  if (report) *report = std::move(local);
  return out;
}

Standardizer Standardizer::fit(const FeatureTable& table, std::span<const std::size_t> rows) {
  if (rows.empty()) throw Error(Errc::empty_input, "cannot standardize zero rows");
  const std::size_t f = table.num_features();
  Standardizer s{std::vector<double>(f, 0.0), std::vector<double>(f, 0.0)};
  for (auto r : rows) {
    for (std::size_t j = 0; j < f; ++j) s.mean[j] += table.rows.at(r).values.at(j);
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : s.mean) m /= n;
  for (auto r : rows) {
    for (std::size_t j = 0; j < f; ++j) {
      const double d = table.rows[r].values[j] - s.mean[j];
      s.sd[j] += d * d;
    }
  }
  for (auto& v : s.sd) {
    v = std::sqrt(v / n);
    if (!(v > 0.0)) v = 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> values) const {
  if (values.size() != mean.size()) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(mean.size()) +
                                              " features, got " + std::to_string(values.size()));
  }
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out[j] = (values[j] - mean[j]) / sd[j];
  return out;
}

// ---------------------------------------------------------------------------

Network Network::init(std::size_t inputs, std::size_t classes, const MlpConfig& config,
                      std::uint64_t seed) {
  if (inputs == 0 || classes < 2 || config.hidden1 == 0 || config.hidden2 == 0) {
    throw Error(Errc::invalid_argument, "network needs inputs, hidden units and >= 2 classes");
  }
  Rng rng(seed);
  auto layer = [&rng](std::size_t out, std::size_t in) {
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    Eigen::MatrixXd w(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-limit, limit);
    }
    return w;
  };
  Network n;
  n.w1 = layer(config.hidden1, inputs);
  n.b1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config.hidden1));
  n.w2 = layer(config.hidden2, config.hidden1);
  n.b2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config.hidden2));
  n.w3 = layer(classes, config.hidden2);
  n.b3 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(classes));
  return n;
}

Eigen::MatrixXd Network::forward(const Eigen::MatrixXd& x) const {
  if (x.cols() != w1.cols()) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(w1.cols()) +
                                              " inputs, got " + std::to_string(x.cols()));
  }
  Eigen::MatrixXd a1 = (x * w1.transpose()).rowwise() + b1.transpose();
  tanh_in_place(a1);
  const Eigen::MatrixXd a2 = (a1 * w2.transpose()).rowwise() + b2.transpose();
  Eigen::MatrixXd z = (a2 * w3.transpose()).rowwise() + b3.transpose();
  softmax_rows(z);
  return z;
}

double Network::loss(const Eigen::MatrixXd& x, std::span<const std::size_t> labels,
                     double lambda) const {
  Workspace ws;
  return loss_and_gradient(*this, x, labels, lambda, nullptr, ws);
}

Network Network::gradient(const Eigen::MatrixXd& x, std::span<const std::size_t> labels,
                          double lambda) const {
  Network g = *this;
  Workspace ws;
  loss_and_gradient(*this, x, labels, lambda, &g, ws);
  return g;
}

std::size_t Network::parameter_count() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size() + w3.size() +
                                  b3.size());
}

std::vector<double> Network::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  Network& self = const_cast<Network&>(*this);
  for_each_block(self, [&out](double* p, Eigen::Index n) { out.insert(out.end(), p, p + n); });
  return out;
}

void Network::set_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw Error(Errc::dimension_mismatch, "parameter vector has the wrong length");
  }
  std::size_t at = 0;
  for_each_block(*this, [&](double* p, Eigen::Index n) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(at), n, p);
    at += static_cast<std::size_t>(n);
  });
}

// ---------------------------------------------------------------------------

MlpModel train_mlp(const FeatureTable& table, const MlpConfig& config,
                   std::span<const std::size_t> rows) {
  if (table.num_classes() < 2) throw Error(Errc::invalid_argument, "need at least 2 classes");
  if (table.num_features() == 0) throw Error(Errc::invalid_argument, "no features");
  if (config.tours == 0) throw Error(Errc::config, "tours must be positive");
  if (!(config.l2_lambda > 0.0) || !(config.learning_rate > 0.0)) {
    throw Error(Errc::config, "l2_lambda and learning_rate must be positive");
  }
  std::vector<std::size_t> owned;
  if (rows.empty()) {
    owned = all_rows(table);
    rows = owned;
  }
  if (rows.empty()) throw Error(Errc::empty_input, "no training rows");
  {
    std::vector<bool> seen(table.num_classes(), false);
    std::size_t distinct = 0;
    for (auto r : rows) {
      const auto label = table.rows.at(r).label;
      if (label >= seen.size()) throw Error(Errc::invalid_argument, "label out of range");
      if (!seen[label]) {
        seen[label] = true;
        ++distinct;
      }
    }
    if (distinct < 2) throw Error(Errc::invalid_argument, "training rows cover fewer than 2 classes");
  }

  MlpModel model;
  model.feature_names = table.feature_names;
  model.class_names = table.class_names;
  model.scaler = Standardizer::fit(table, rows);
  const Eigen::MatrixXd x = design_matrix(table, model.scaler, rows);
  const auto labels = labels_of(table, rows);

  std::vector<TourResult> tours(config.tours);
  parallel_for(config.tours, config.jobs, [&](std::size_t t) {
    const std::uint64_t seed = Rng::derive(config.seed, t).next();
    tours[t] = run_tour(x, labels, table.num_classes(), config, seed);
  });
  std::size_t best = 0;
  for (std::size_t t = 1; t < tours.size(); ++t) {
    if (tours[t].loss < tours[best].loss) best = t;
  }
  model.best_tour = best;
  model.penalized_loss = tours[best].loss;
  model.network = std::move(tours[best].network);
  model.loss_history = std::move(tours[best].history);
  return model;
}

std::vector<double> predict_proba(const MlpModel& model, std::span<const double> row) {
  const auto z = model.scaler.apply(row);
  Eigen::MatrixXd x(1, static_cast<Eigen::Index>(z.size()));
  for (std::size_t j = 0; j < z.size(); ++j) x(0, static_cast<Eigen::Index>(j)) = z[j];
  const Eigen::MatrixXd p = model.network.forward(x);
  return {p.data(), p.data() + p.size()};
}

Eigen::MatrixXd predict_proba(const MlpModel& model, const FeatureTable& table,
                              std::span<const std::size_t> rows) {
  if (table.num_features() != model.scaler.mean.size()) {
    throw Error(Errc::dimension_mismatch, "table has " + std::to_string(table.num_features()) +
                                              " features, model expects " +
                                              std::to_string(model.scaler.mean.size()));
  }
  return model.network.forward(design_matrix(table, model.scaler, rows));
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::empty_input, "argmax of nothing");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::string mlp_model_to_json(const MlpModel& model) {
  auto matrix = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  const Network& n = model.network;
  nlohmann::json j;
  j["format"] = "litstyle-mlp";
  j["version"] = 1;
  j["features"] = model.feature_names;
  j["classes"] = model.class_names;
  j["scaler"] = {{"mean", model.scaler.mean}, {"sd", model.scaler.sd}};
  j["best_tour"] = model.best_tour;
  j["penalized_loss"] = model.penalized_loss;
  j["epochs"] = model.loss_history.size() - 1;
  j["layers"] = nlohmann::json::array({
      {{"activation", "tanh"}, {"weights", matrix(n.w1)}, {"bias", vec(n.b1)}},
      {{"activation", "identity"}, {"weights", matrix(n.w2)}, {"bias", vec(n.b2)}},
      {{"activation", "softmax"}, {"weights", matrix(n.w3)}, {"bias", vec(n.b3)}},
  });
  return j.dump(1) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

struct RawImportance {
  // Summed over rows: correct-count drops (overall and one-vs-rest).
  std::vector<double> overall;
  std::vector<std::vector<double>> per_class;
};

RawImportance importance_drops(const MlpModel& model, const FeatureTable& table,
                               std::span<const std::size_t> rows, std::uint64_t seed,
                               std::size_t repeats) {
  if (repeats == 0) throw Error(Errc::config, "importance needs at least one permutation");
  const std::size_t f = table.num_features();
  const std::size_t classes = model.class_names.size();
  const auto labels = labels_of(table, rows);
  const Eigen::MatrixXd x = design_matrix(table, model.scaler, rows);

  auto correct = [&](const std::vector<std::size_t>& pred, std::vector<double>& per_class) {
    double hits = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == labels[i]) hits += 1.0;
      for (std::size_t c = 0; c < classes; ++c) {
        if ((pred[i] == c) == (labels[i] == c)) per_class[c] += 1.0;
      }
    }
    return hits;
  };
  std::vector<double> base_class(classes, 0.0);
  const double base = correct(predictions(model.network.forward(x)), base_class);

  RawImportance raw{std::vector<double>(f, 0.0),
                    std::vector<std::vector<double>>(classes, std::vector<double>(f, 0.0))};
  std::vector<Eigen::Index> order(rows.size());
  for (std::size_t j = 0; j < f; ++j) {
    Rng rng = Rng::derive(seed, j);
    for (std::size_t r = 0; r < repeats; ++r) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
      rng.shuffle(std::span<Eigen::Index>(order));
      Eigen::MatrixXd xp = x;
      const auto col = static_cast<Eigen::Index>(j);
      for (std::size_t i = 0; i < order.size(); ++i) {
        xp(static_cast<Eigen::Index>(i), col) = x(order[i], col);
      }
      std::vector<double> per_class(classes, 0.0);
      const double hits = correct(predictions(model.network.forward(xp)), per_class);
      raw.overall[j] += (base - hits) / static_cast<double>(repeats);
      for (std::size_t c = 0; c < classes; ++c) {
        raw.per_class[c][j] += (base_class[c] - per_class[c]) / static_cast<double>(repeats);
      }
    }
  }
  return raw;
}

std::vector<double> normalize_by_max(const std::vector<double>& raw) {
  double top = 0.0;
  for (double v : raw) top = std::max(top, v);
  std::vector<double> out(raw.size(), 0.0);
  if (top > 0.0) {
    for (std::size_t j = 0; j < raw.size(); ++j) out[j] = std::max(0.0, raw[j]) / top;
  }
  return out;
}

Importances finish_importances(RawImportance raw, double rows) {
  Importances imp;
  for (auto& v : raw.overall) v /= rows;
  for (auto& cls : raw.per_class) {
    for (auto& v : cls) v /= rows;
  }
  imp.overall = normalize_by_max(raw.overall);
  for (const auto& cls : raw.per_class) imp.per_class.push_back(normalize_by_max(cls));
  imp.raw_overall = std::move(raw.overall);
  imp.raw_per_class = std::move(raw.per_class);
  return imp;
}

}  // namespace

Importances feature_importance(const MlpModel& model, const FeatureTable& table,
                               std::span<const std::size_t> rows, std::uint64_t seed,
                               std::size_t repeats) {
  if (rows.empty()) throw Error(Errc::empty_input, "no held-out rows for importance");
  return finish_importances(importance_drops(model, table, rows, seed, repeats),
                            static_cast<double>(rows.size()));
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) {
    throw Error(Errc::dimension_mismatch, "scores and labels differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double p = 0.0;
  double n = 0.0;
  for (bool b : positive) (b ? p : n) += 1.0;
  std::vector<RocPoint> curve{{0.0, 0.0}};
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (positive[order[j]] ? tp : fp) += 1.0;
      ++j;
    }
    curve.push_back({n > 0.0 ? fp / n : 0.0, p > 0.0 ? tp / p : 0.0});
    i = j;
  }
  if (curve.back().fpr != 1.0 || curve.back().tpr != 1.0) curve.push_back({1.0, 1.0});
  return curve;
}

double auc(std::span<const RocPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) * 0.5;
  }
  return area;
}

std::vector<std::size_t> assign_folds(const FeatureTable& table, std::size_t k, std::uint64_t seed,
                                      bool stratified, std::vector<std::string>* warnings) {
  const std::size_t n = table.rows.size();
  if (k < 2) throw Error(Errc::config, "k must be at least 2");
  if (k > n) {
    throw Error(Errc::invalid_argument,
                "k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " rows");
  }
  std::vector<std::vector<std::size_t>> strata;
  if (stratified) {
    std::vector<std::vector<std::size_t>> by_class(table.num_classes());
    for (std::size_t i = 0; i < n; ++i) by_class.at(table.rows[i].label).push_back(i);
    std::vector<std::size_t> pooled;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      if (by_class[c].empty()) continue;
      if (by_class[c].size() < k) {
        if (warnings) {
          warnings->push_back("class '" + table.class_names[c] + "' has " +
                              std::to_string(by_class[c].size()) + " rows (< k = " +
                              std::to_string(k) + "); pooled for stratification");
        }
        pooled.insert(pooled.end(), by_class[c].begin(), by_class[c].end());
      } else {
        strata.push_back(std::move(by_class[c]));
      }
    }
    if (!pooled.empty()) strata.push_back(std::move(pooled));
  } else {
    strata.push_back(all_rows(table));
  }
  Rng rng = Rng::derive(seed, 0x666f6c6473ULL);
  std::vector<std::size_t> fold(n, 0);
  std::size_t offset = 0;
  for (auto& stratum : strata) {
    rng.shuffle(std::span<std::size_t>(stratum));
    for (std::size_t i = 0; i < stratum.size(); ++i) fold[stratum[i]] = (offset + i) % k;
    offset = (offset + stratum.size()) % k;
  }
  return fold;
}

EvalReport kfold_cv(const FeatureTable& table, const MlpConfig& config, const CvOptions& options) {
  EvalReport report;
  report.feature_names = table.feature_names;
  report.class_names = table.class_names;
  report.fold_of_row =
      assign_folds(table, options.k, options.seed, options.stratified, &report.warnings);
  const std::size_t classes = table.num_classes();
  const std::size_t folds = options.single_split ? 1 : options.k;

  struct FoldResult {
    std::vector<std::size_t> test;
    Eigen::MatrixXd proba;
    std::vector<double> prior;
    RawImportance raw;
  };
  std::vector<FoldResult> results(folds);
  parallel_for(folds, options.jobs, [&](std::size_t f) {
    std::vector<std::size_t> train;
    FoldResult& out = results[f];
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      (report.fold_of_row[i] == f ? out.test : train).push_back(i);
    }
    MlpConfig fold_config = config;
    fold_config.seed = Rng::derive(options.seed, f).next();
    fold_config.jobs = 1;
    const MlpModel model = train_mlp(table, fold_config, train);
    out.proba = predict_proba(model, table, out.test);
    out.prior.assign(classes, 0.0);
    for (auto r : train) out.prior[table.rows[r].label] += 1.0;
    for (auto& p : out.prior) p /= static_cast<double>(train.size());
    out.raw = importance_drops(model, table, out.test, Rng::derive(options.seed, 1000 + f).next(),
                               options.importance_repeats);
  });

  std::size_t total = 0;
  for (const auto& r : results) total += r.test.size();
  report.probabilities.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(classes));
  report.confusion_counts.assign(classes, std::vector<std::size_t>(classes, 0));
  RawImportance raw{std::vector<double>(table.num_features(), 0.0),
                    std::vector<std::vector<double>>(
                        classes, std::vector<double>(table.num_features(), 0.0))};
  double ce_model = 0.0;
  double ce_null = 0.0;
  std::size_t wrong = 0;
  Eigen::Index at = 0;
  for (const auto& r : results) {
    const auto pred = predictions(r.proba);
    for (std::size_t i = 0; i < r.test.size(); ++i, ++at) {
      const std::size_t y = table.rows[r.test[i]].label;
      report.evaluated_rows.push_back(r.test[i]);
      report.probabilities.row(at) = r.proba.row(static_cast<Eigen::Index>(i));
      ++report.confusion_counts[y][pred[i]];
      if (pred[i] != y) ++wrong;
      ce_model -= std::log(std::max(r.proba(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(y)),
                                    kProbFloor));
      ce_null -= std::log(std::max(r.prior[y], kProbFloor));
    }
    for (std::size_t j = 0; j < raw.overall.size(); ++j) {
      raw.overall[j] += r.raw.overall[j];
      for (std::size_t c = 0; c < classes; ++c) raw.per_class[c][j] += r.raw.per_class[c][j];
    }
  }
  report.misclassification = static_cast<double>(wrong) / static_cast<double>(total);
  report.r2_entropy = ce_null > 0.0 ? 1.0 - ce_model / ce_null : 0.0;
  for (const auto& counts : report.confusion_counts) {
    std::size_t row_total = 0;
    for (auto c : counts) row_total += c;
    std::vector<double> row(classes, 0.0);
    if (row_total > 0) {
      for (std::size_t c = 0; c < classes; ++c) {
        row[c] = static_cast<double>(counts[c]) / static_cast<double>(row_total);
      }
    }
    report.confusion.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<double> scores(total);
    auto positive = std::make_unique<bool[]>(total);  // std::vector<bool> has no span view
    for (std::size_t i = 0; i < total; ++i) {
      scores[i] = report.probabilities(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      positive[i] = table.rows[report.evaluated_rows[i]].label == c;
    }
    report.roc.push_back(roc_curve(scores, std::span<const bool>(positive.get(), total)));
    report.auc.push_back(auc(report.roc.back()));
  }
  report.importances = finish_importances(std::move(raw), static_cast<double>(total));
  return report;
}

std::vector<FootprintPoint> footprint(const EvalReport& report, std::string_view group) {
  const auto it = std::find(report.class_names.begin(), report.class_names.end(), group);
  if (it == report.class_names.end()) {
    throw Error(Errc::invalid_argument, "unknown group '" + std::string(group) + "'");
  }
  const auto c = static_cast<std::size_t>(it - report.class_names.begin());
  std::vector<FootprintPoint> out;
  for (std::size_t j = 0; j < report.feature_names.size(); ++j) {
    out.push_back({report.feature_names[j], report.importances.per_class.at(c).at(j)});
  }
  return out;
}

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["format"] = "litstyle-eval";
  j["version"] = 1;
  j["features"] = report.feature_names;
  j["classes"] = report.class_names;
  j["misclassification"] = report.misclassification;
  j["r2_entropy"] = report.r2_entropy;
  j["confusion_counts"] = report.confusion_counts;
  j["confusion"] = report.confusion;
  j["auc"] = report.auc;
  nlohmann::json roc = nlohmann::json::object();
  for (std::size_t c = 0; c < report.roc.size(); ++c) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : report.roc[c]) pts.push_back({p.fpr, p.tpr});
    roc[report.class_names[c]] = std::move(pts);
  }
  j["roc"] = std::move(roc);
  j["importance"] = {{"overall", report.importances.overall},
                     {"raw_overall", report.importances.raw_overall},
                     {"per_class", report.importances.per_class}};
  j["fold_of_row"] = report.fold_of_row;
  nlohmann::json preds = nlohmann::json::array();
  for (std::size_t i = 0; i < report.evaluated_rows.size(); ++i) {
    std::vector<double> p(static_cast<std::size_t>(report.probabilities.cols()));
    for (std::size_t c = 0; c < p.size(); ++c) {
      p[c] = report.probabilities(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
    preds.push_back({{"row", report.evaluated_rows[i]}, {"probabilities", p}});
  }
  j["predictions"] = std::move(preds);
  j["warnings"] = report.warnings;
  return j.dump(1) + "\n";
}

void write_confusion_csv(std::ostream& out, const EvalReport& report) {
  CsvWriter csv(out);
  std::vector<std::string> header{"class"};
  header.insert(header.end(), report.class_names.begin(), report.class_names.end());
  csv.row(header);
  for (std::size_t c = 0; c < report.class_names.size(); ++c) {
    csv.field(report.class_names[c]);
    for (double v : report.confusion[c]) csv.field(v);
    csv.end_row();
  }
}

void write_importances_csv(std::ostream& out, const EvalReport& report) {
  CsvWriter csv(out);
  csv.row({"feature", "importance", "raw_drop"});
  for (std::size_t j = 0; j < report.feature_names.size(); ++j) {
    csv.field(report.feature_names[j])
        .field(report.importances.overall[j])
        .field(report.importances.raw_overall[j]);
    csv.end_row();
  }
}

void write_roc_csv(std::ostream& out, const EvalReport& report) {
  CsvWriter csv(out);
  csv.row({"class", "fpr", "tpr"});
  for (std::size_t c = 0; c < report.roc.size(); ++c) {
    for (const auto& p : report.roc[c]) {
      csv.field(report.class_names[c]).field(p.fpr).field(p.tpr);
      csv.end_row();
    }
  }
}

void write_footprints_csv(std::ostream& out, const EvalReport& report) {
  CsvWriter csv(out);
  csv.row({"group", "feature", "importance"});
  for (const auto& group : report.class_names) {
    for (const auto& p : footprint(report, group)) {
      csv.field(group).field(p.feature).field(p.importance);
      csv.end_row();
    }
  }
}

}  // namespace litstyle
