// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here, next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "litstyle/complexity.hpp"
#include "litstyle/corpus.hpp"
#include "litstyle/learn.hpp"
#include "litstyle/random.hpp"
#include "litstyle/sentiment.hpp"
#include "litstyle/stats.hpp"
#include "litstyle/topics.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace litstyle;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Relative error within 1e-9; an exact zero must be matched to 1e-15.
bool close(double got, double want, double* worst) {
  const double diff = std::abs(got - want);
  const double rel = want == 0.0 ? diff : diff / std::abs(want);
  *worst = std::max(*worst, rel);
  return want == 0.0 ? diff <= 1e-15 : rel <= 1e-9;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome formula_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  const int trials = 200;
  std::size_t failures = 0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::string> lemmas;
    const std::size_t types = 1 + rng.below(30);
    for (std::size_t i = 0, n = 1 + rng.below(200); i < n; ++i) lemmas.push_back("w" + std::to_string(rng.below(types)));
    const auto stream = synth::stream_from_lemmas("d", lemmas);
    failures += !close(shannon_entropy(stream.tokens), oracle::entropy(lemmas), &worst);

    const std::size_t dim = 1 + rng.below(12);
    const auto chunks = synth::random_vectors(2 + rng.below(12), dim, rng.next());
    failures += !close(intra_textual_variance(chunks), oracle::itv(chunks), &worst);
    failures += !close(stepwise_distance(chunks), oracle::swd(chunks), &worst);

    const auto words = synth::random_vectors(2 + rng.below(40), dim, rng.next());
    failures += !close(forward_flow(words), oracle::forward_flow(words), &worst);

    const std::size_t k = 2 + rng.below(20);
    const auto p = synth::random_distribution(k, rng.next());
    const auto q = synth::random_distribution(k, rng.next());
    failures += !close(hellinger(p, q), oracle::hellinger(p, q), &worst);

    std::vector<std::vector<double>> chapters;
    for (std::size_t c = 0, n = 2 + rng.below(8); c < n; ++c) chapters.push_back(synth::random_distribution(k, rng.next()));
    failures += !close(harmony(p, chapters), oracle::harmony(p, chapters), &worst);
    failures += !close(variety(chapters), oracle::variety(chapters), &worst);
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 5.0,
          std::to_string(trials) + " inputs x 7 measures, " + std::to_string(failures) +
              " mismatches, worst rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s (< 5 s)"};
}

Outcome beauty_example() {
  const bool emma = beauty_predicate(0.097, 0.103);
  const bool pride = beauty_predicate(0.091, 0.099);
  const std::vector<BeautyAssessment> books{{"Pride and Prejudice", 0.091, 0.099, pride},
                                            {"Emma", 0.097, 0.103, emma}};
  const auto order = rank_beauty(books);
  const bool emma_first = !order.empty() && books[order[0]].doc_id == "Emma";
  return {emma && pride && emma_first,
          std::string("(0.097, 0.103) ") + (emma ? "beautiful" : "not beautiful") + ", (0.091, 0.099) " +
              (pride ? "beautiful" : "not beautiful") + ", first: " + books[order[0]].doc_id};
}

Outcome vocabulary_decay() {
  const auto t0 = std::chrono::steady_clock::now();
  const synth::DecaySpec spec;
  const std::size_t per_group = 100;
  std::size_t flagged_contracting = 0, flagged_controls = 0;
  for (std::size_t i = 0; i < 2 * per_group; ++i) {
    const bool contracting = i < per_group;
    const auto text = synth::decay_text("t" + std::to_string(i), contracting, spec, 1000 + i);
    const auto profile = segment_entropy(text.doc_id, segment_equal(text, spec.segments));
    const auto d = decay_fit(profile.h, 10, 0.05);
    (contracting ? flagged_contracting : flagged_controls) += d.decaying ? 1 : 0;
  }
  // exact cubic
  std::vector<double> exact;
  for (int b = 1; b <= 10; ++b) {
    const double y = 3.0 - 0.2 * b + 0.03 * b * b - 0.002 * b * b * b;
    exact.insert(exact.end(), 10, y);
  }
  const double r2_adj = decay_fit(exact).fit.r2_adj;
  const double secs = seconds_since(t0);
  const double hit = static_cast<double>(flagged_contracting) / per_group;
  const double false_alarm = static_cast<double>(flagged_controls) / per_group;
  const bool ok = hit >= 0.95 && false_alarm <= 0.05 && std::abs(r2_adj - 1.0) <= 1e-9 && secs < 30.0;
  return {ok, "contracting flagged " + fmt("%.2f", hit) + " (>= 0.95), controls flagged " +
                  fmt("%.2f", false_alarm) + " (<= 0.05), exact-cubic r2_adj - 1 = " +
                  fmt("%.1e", r2_adj - 1.0) + ", " + fmt("%.2f", secs) + " s (< 30 s)"};
}

Outcome h_ttr() {
  const auto corpus = synth::diversity_gradient_corpus(20, 50, 100, 10, 300, 7);
  std::vector<double> h, t;
  for (const auto& doc : corpus) {
    for (const auto& seg : segment_equal(doc, 50)) {
      h.push_back(shannon_entropy(seg.tokens));
      t.push_back(ttr(seg.tokens));
    }
  }
  const double r = pearson(h, t);
  return {r > 0.5, "Pearson r(H, TTR) = " + fmt("%.3f", r) + " over " + std::to_string(h.size()) +
                       " segments (> 0.5)"};
}

Outcome lda_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto corpus = synth::disjoint_topic_corpus({});
  std::uint64_t tokens = 0;
  for (const auto& d : corpus.docs) tokens += d.size();
  bool conserved = true;
  double min_purity = 1.0;
  std::string purities;
  for (std::uint64_t seed : {1, 2, 3}) {
    LdaConfig c;
    c.topics = 3;
    c.iterations = 500;
    c.seed = seed;
    const auto m = fit_lda(corpus.docs, corpus.vocab, c, [&](std::size_t, const TopicModel& s) {
      if (s.total_topic_word() != tokens || s.total_doc_topic() != tokens) conserved = false;
    });
    std::vector<std::vector<std::string>> top;
    for (std::size_t k = 0; k < m.num_topics(); ++k) {
      std::vector<std::string> w;
      for (const auto& rw : top_words(m, k, 10)) w.push_back(rw.word);
      top.push_back(std::move(w));
    }
    const double purity = oracle::match_topics(top, corpus.topic_words).purity;
    min_purity = std::min(min_purity, purity);
    purities += (purities.empty() ? "" : "/") + fmt("%.2f", purity);
  }
  const double secs = seconds_since(t0);
  return {min_purity >= 0.8 && conserved && secs < 60.0,
          "top-10 purity " + purities + " for seeds 1/2/3 (>= 0.8), counts " +
              (conserved ? "conserved" : "NOT conserved") + " every sweep, " + fmt("%.2f", secs) +
              " s (< 60 s)"};
}

MlpConfig acceptance_mlp() {
  // Reduced schedule (3 tours, 500 epochs); see the README.
  MlpConfig c;
  c.tours = 3;
  c.max_epochs = 500;
  return c;
}

Outcome classifier() {
  const auto blobs = synth::gaussian_blobs({4, 200, 5, 5.0, 0, 1});
  const auto report = kfold_cv(blobs, acceptance_mlp(), {});
  const double min_auc = *std::min_element(report.auc.begin(), report.auc.end());
  const auto shuffled = synth::shuffle_labels(blobs, 99);
  const auto null_report = kfold_cv(shuffled, acceptance_mlp(), {});
  const double r2 = null_report.r2_entropy;
  const bool ok = report.misclassification <= 0.05 && min_auc >= 0.98 && r2 >= -0.05 && r2 <= 0.05;
  return {ok, "misclassification " + fmt("%.4f", report.misclassification) + " (<= 0.05), min AUC " +
                  fmt("%.4f", min_auc) + " (>= 0.98), shuffled R2_entropy " + fmt("%.4f", r2) +
                  " (in [-0.05, 0.05])"};
}

Outcome gradient_check() {
  Rng rng(31);
  double worst = 0.0;
  std::size_t probes = 0;
  for (int net_i = 0; net_i < 3; ++net_i) {
    MlpConfig c;
    c.hidden1 = 3 + rng.below(8);
    c.hidden2 = 2 + rng.below(5);
    const std::size_t inputs = 2 + rng.below(5), classes = 2 + rng.below(3), rows = 6 + rng.below(10);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(inputs));
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    std::vector<std::size_t> labels(rows);
    for (std::size_t i = 0; i < rows; ++i) labels[i] = i < classes ? i : rng.below(classes);
    Network net = Network::init(inputs, classes, c, rng.next());
    for (auto* b : {&net.b1, &net.b2, &net.b3}) {
      for (Eigen::Index i = 0; i < b->size(); ++i) (*b)(i) = 0.2 * rng.normal();
    }
    const double lambda = 0.01;
    const Network g = net.gradient(x, labels, lambda);
    const double h = 1e-5;
    auto probe = [&](auto member) {
      for (int p = 0; p < 5; ++p) {
        Network plus = net, minus = net;
        const auto i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>((plus.*member).size())));
        (plus.*member).data()[i] += h;
        (minus.*member).data()[i] -= h;
        const double numeric = (plus.loss(x, labels, lambda) - minus.loss(x, labels, lambda)) / (2.0 * h);
        const double analytic = (g.*member).data()[i];
        const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic - numeric) / scale);
        ++probes;
      }
    };
    probe(&Network::w1);
    probe(&Network::w2);
    probe(&Network::w3);
    probe(&Network::b1);
    probe(&Network::b2);
    probe(&Network::b3);
  }
  return {worst <= 1e-5, std::to_string(probes) + " probes (5 per layer, 3 networks), worst rel err " +
                             fmt("%.2e", worst) + " (<= 1e-5)"};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_pipeline(const fs::path& cwd, const std::string& out) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" LITSTYLE_BIN "' -q -c litstyle.conf --out " + out +
                          " all 2>" + out + ".stderr";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "litstyle_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  synth::write_fixture_corpus(dir);
  const int a = run_pipeline(dir, "run_a");
  const int b = run_pipeline(dir, "run_b");
  if (a != 0 || b != 0) {
    return {false, "pipeline exit status " + std::to_string(a) + "/" + std::to_string(b) + ": " +
                       read_file(dir / "run_a.stderr")};
  }
  std::size_t compared = 0, differing = 0, csv_json = 0;
  std::string first_diff;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir / "run_a")) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir / "run_a"));
  }
  std::size_t in_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "run_b")) in_b += e.is_regular_file() ? 1 : 0;
  std::sort(files.begin(), files.end());
  for (const auto& rel : files) {
    if (rel == "run.log") continue;  // wall-clock timings
    ++compared;
    const auto ext = rel.extension();
    if (ext == ".csv" || ext == ".json") ++csv_json;
    if (!fs::exists(dir / "run_b" / rel) || read_file(dir / "run_a" / rel) != read_file(dir / "run_b" / rel)) {
      ++differing;
      if (first_diff.empty()) first_diff = rel.string();
    }
  }
  const bool ok = differing == 0 && in_b == files.size() && csv_json > 0;
  return {ok, std::to_string(compared) + " files compared (" + std::to_string(csv_json) +
                  " CSV/JSON, incl. LDA counts and MLP weights), " + std::to_string(differing) +
                  " differ" + (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
}

Outcome importance_sanity() {
  CvOptions o;
  auto noisy = synth::gaussian_blobs({4, 200, 5, 5.0, 1, 1});
  const auto blob_report = kfold_cv(noisy, acceptance_mlp(), o);
  const double noise = blob_report.importances.overall.back();

  const auto signal = synth::one_signal_table(200, 3, 5.0, 2);
  const auto sig_report = kfold_cv(signal, acceptance_mlp(), o);
  const double informative = sig_report.importances.overall[0];
  double max_noise = 0.0;
  for (std::size_t j = 1; j < sig_report.importances.overall.size(); ++j) {
    max_noise = std::max(max_noise, sig_report.importances.overall[j]);
  }
  const bool ok = noise < 0.1 && informative == 1.0 && max_noise < 0.1;
  return {ok, "appended noise on blobs " + fmt("%.4f", noise) + " (< 0.1), one-signal informative " +
                  fmt("%.4f", informative) + " (== 1), its noise columns max " + fmt("%.4f", max_noise) +
                  " (< 0.1)"};
}

Outcome sentiment_algebra() {
  Rng rng(10);
  const auto pos_v = synth::random_vectors(15, 30, 1);
  const auto neg_v = synth::random_vectors(15, 30, 2);
  ResolvedLabels pos{"positive", {}, {}}, neg{"negative", {}, {}};
  for (const auto& v : pos_v) pos.vectors.emplace_back(v);
  for (const auto& v : neg_v) neg.vectors.emplace_back(v);
  const auto words = synth::random_vectors(1000, 30, 3);
  std::size_t asym = 0;
  std::vector<double> scores;
  for (const auto& w : words) {
    const double s = aap(w, pos, neg);
    if (s != -aap(w, neg, pos)) ++asym;
    scores.push_back(s);
  }
  auto argsort = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
  };
  const auto order = argsort(scores);
  std::size_t reordered = 0;
  const int maps = 50;
  for (int m = 0; m < maps; ++m) {
    const double a = 0.001 + 100.0 * rng.uniform();
    const double b = -10.0 + 20.0 * rng.uniform();
    std::vector<double> mapped;
    for (double s : scores) mapped.push_back(a * s + b);
    if (argsort(mapped) != order) ++reordered;
  }
  return {asym == 0 && reordered == 0,
          "1000 vectors: " + std::to_string(asym) + " antisymmetry violations, " + std::to_string(reordered) +
              "/" + std::to_string(maps) + " affine maps changed the argsort (exact)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"formula oracles", formula_oracles},
      {"beauty predicate (Austen example)", beauty_example},
      {"vocabulary decay detection", vocabulary_decay},
      {"H-TTR correlation", h_ttr},
      {"LDA topic recovery", lda_recovery},
      {"classifier on Gaussian blobs", classifier},
      {"MLP gradient check", gradient_check},
      {"pipeline determinism", determinism},
      {"feature importance sanity", importance_sanity},
      {"sentiment algebra", sentiment_algebra},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].name << ": " << o.detail
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
