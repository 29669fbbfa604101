#include <algorithm>
#include <map>
#include <ostream>

#include "litstyle/error.hpp"
#include "stages.hpp"
#include "svg.hpp"

namespace litstyle::cli::detail {

namespace {

// Rows of `table` grouped by the value in `key`, in first-seen order.
std::vector<std::pair<std::string, std::vector<const std::vector<std::string>*>>> group_rows(
    const CsvTable& table, std::string_view key) {
  std::vector<std::pair<std::string, std::vector<const std::vector<std::string>*>>> groups;
  const auto col = table.column(key);
  for (const auto& row : table.rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == row[col]; });
    if (it == groups.end()) {
      groups.push_back({row[col], {}});
      it = std::prev(groups.end());
    }
    it->second.push_back(&row);
  }
  return groups;
}

void save_plot(const fs::path& path, const Plot& plot) {
  write_file(path, [&](std::ostream& o) { o << render_svg(plot); });
}

std::string safe_name(std::string s) {
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

void sentiment_figures(const Context& ctx, const fs::path& figs) {
  const fs::path in = stage_dir(ctx, Stage::sentiment);
  const CsvTable cats = read_table(in / "categories.csv");
  Plot p{"Sentiment by category", "average affective polarity", "happiness", {}, {}, {}, {}};
  Series s{"categories", SeriesKind::scatter, {}, {}};
  for (const auto& row : cats.rows) {
    const double h = cell(row[cats.column("happiness")]);
    if (std::isnan(h)) continue;
    s.points.emplace_back(cell(row[cats.column("aap")]), h);
    s.labels.push_back(row[cats.column("subject")]);
  }
  p.series.push_back(std::move(s));
  save_plot(figs / "sentiment_categories.svg", p);

  const CsvTable authors = read_table(in / "author_categories.csv");
  for (const auto& [category, rows] : group_rows(authors, "category")) {
    Plot q{"Sentiment of " + category + " authors", "average affective polarity", "happiness", {}, {}, {}, {}};
    Series a{category, SeriesKind::scatter, {}, {}};
    for (const auto* row : rows) {
      const double h = cell((*row)[authors.column("happiness")]);
      if (std::isnan(h)) continue;
      a.points.emplace_back(cell((*row)[authors.column("aap")]), h);
      a.labels.push_back((*row)[authors.column("author")]);
    }
    q.series.push_back(std::move(a));
    save_plot(figs / ("sentiment_authors_" + category + ".svg"), q);
  }
}

void complexity_figures(const Context& ctx, const fs::path& figs) {
  const fs::path in = stage_dir(ctx, Stage::complexity);

  const CsvTable curves = read_table(in / "decay_curves.csv");
  Plot decay{"Vocabulary decay", "decile", "standardized entropy", {}, {}, {}, {}};
  for (const auto& [category, rows] : group_rows(curves, "category")) {
    Series mean{category, SeriesKind::scatter, {}, {}};
    Series fit{category + " fit", SeriesKind::line, {}, {}};
    for (const auto* row : rows) {
      const double x = cell((*row)[curves.column("bucket")]);
      mean.points.emplace_back(x, cell((*row)[curves.column("mean")]));
      fit.points.emplace_back(x, cell((*row)[curves.column("fitted")]));
    }
    decay.series.push_back(std::move(mean));
    decay.series.push_back(std::move(fit));
  }
  save_plot(figs / "entropy_decay.svg", decay);

  // Author means of the two dispersion measures.
  const CsvTable features = read_table(in / "features.csv");
  Plot disp{"Dispersion by author", "intra-textual variance", "stepwise distance", {}, {}, {}, {}};
  for (const auto& [category, rows] : group_rows(features, "category")) {
    Series s{category, SeriesKind::scatter, {}, {}};
    std::map<std::string, std::tuple<double, double, int>> by_author;
    std::vector<std::string> order;
    for (const auto* row : rows) {
      const double itv = cell((*row)[features.column("ITV")]);
      const double swd = cell((*row)[features.column("SWD")]);
      if (std::isnan(itv) || std::isnan(swd)) continue;
      const std::string& author = (*row)[features.column("author")];
      if (!by_author.count(author)) order.push_back(author);
      auto& [a, b, n] = by_author[author];
      a += itv;
      b += swd;
      ++n;
    }
    for (const auto& author : order) {
      const auto& [a, b, n] = by_author[author];
      s.points.emplace_back(a / n, b / n);
      s.labels.push_back(author);
    }
    if (!s.points.empty()) disp.series.push_back(std::move(s));
  }
  save_plot(figs / "itv_swd_authors.svg", disp);

  if (fs::exists(in / "pca.csv")) {
    const CsvTable pca = read_table(in / "pca.csv");
    Plot traj{"Chunk trajectories", "PC1", "PC2", {}, {}, {}, {}};
    for (const auto& [doc, rows] : group_rows(pca, "doc_id")) {
      Series s{doc, SeriesKind::line, {}, {}};
      for (const auto* row : rows) {
        s.points.emplace_back(cell((*row)[pca.column("pc1")]), cell((*row)[pca.column("pc2")]));
      }
      traj.series.push_back(std::move(s));
    }
    save_plot(figs / "pca_trajectories.svg", traj);
  }

  const CsvTable beauty = read_table(in / "beauty.csv");
  Plot hv{"Harmony and variety", "harmony", "variety", {}, {}, {}, {}};
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& [category, rows] : group_rows(beauty, "category")) {
    Series s{category, SeriesKind::scatter, {}, {}};
    for (const auto* row : rows) {
      const double h = cell((*row)[beauty.column("harmony")]);
      const double v = cell((*row)[beauty.column("variety")]);
      s.points.emplace_back(h, v);
      lo = any ? std::min({lo, h, v}) : std::min(h, v);
      hi = any ? std::max({hi, h, v}) : std::max(h, v);
      any = true;
    }
    hv.series.push_back(std::move(s));
  }
  if (any) {
    hv.series.push_back({"harmony = variety", SeriesKind::line, {{lo, lo}, {hi, hi}}, {}});
  }
  save_plot(figs / "harmony_variety.svg", hv);
}

void classify_figures(const Context& ctx, const fs::path& figs) {
  const fs::path in = stage_dir(ctx, Stage::classify);
  const CsvTable summary = read_table(in / "summary.csv");
  for (const auto& row : summary.rows) {
    if (row[summary.column("status")] != "evaluated") continue;
    const std::string task = row[summary.column("task")];
    const CsvTable roc = read_table(in / task / "roc.csv");
    Plot r{"ROC: " + task, "false positive rate", "true positive rate", {}, {}, {0.0, 1.0}, {0.0, 1.0}};
    for (const auto& [cls, rows] : group_rows(roc, "class")) {
      Series s{cls, SeriesKind::step, {}, {}};
      for (const auto* p : rows) s.points.emplace_back(cell((*p)[roc.column("fpr")]), cell((*p)[roc.column("tpr")]));
      r.series.push_back(std::move(s));
    }
    r.series.push_back({"chance", SeriesKind::line, {{0.0, 0.0}, {1.0, 1.0}}, {}});
    save_plot(figs / ("roc_" + safe_name(task) + ".svg"), r);

    const CsvTable fp = read_table(in / task / "footprints.csv");
    Plot f{"Feature footprints: " + task, "feature", "importance", {}, {}, {}, {0.0, 1.0}};
    bool ticks_set = false;
    for (const auto& [group, rows] : group_rows(fp, "group")) {
      Series s{group, SeriesKind::line, {}, {}};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        s.points.emplace_back(static_cast<double>(i), cell((*rows[i])[fp.column("importance")]));
        if (!ticks_set) f.x_ticks.push_back((*rows[i])[fp.column("feature")]);
      }
      ticks_set = true;
      f.series.push_back(std::move(s));
    }
    save_plot(figs / ("footprints_" + safe_name(task) + ".svg"), f);
  }
}

// Topics with the highest mean document share in each scope, with their
// leading words.
void top_topics_table(const Context& ctx, const fs::path& out) {
  const fs::path in = stage_dir(ctx, Stage::topics);
  const CsvTable dt = read_table(in / "doc_topics.csv");
  write_file(out / "top_topics.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"scope", "rank", "topic", "mean_share", "top_words"});
    for (const auto& [scope, rows] : group_rows(dt, "scope")) {
      std::map<std::size_t, std::pair<double, std::size_t>> share;
      for (const auto* row : rows) {
        auto& [sum, n] = share[static_cast<std::size_t>(cell((*row)[dt.column("topic")]))];
        sum += cell((*row)[dt.column("probability")]);
        ++n;
      }
      std::vector<std::pair<std::size_t, double>> ranked;
      for (const auto& [k, v] : share) ranked.emplace_back(k, v.first / static_cast<double>(v.second));
      std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
      const CsvTable words = read_table(in / ("top_words_" + scope + ".csv"));
      const std::size_t shown = std::min<std::size_t>(5, ranked.size());
      for (std::size_t r = 0; r < shown; ++r) {
        std::string list;
        std::size_t count = 0;
        for (const auto& w : words.rows) {
          if (cell(w[words.column("topic")]) != static_cast<double>(ranked[r].first)) continue;
          if (count++ == 10) break;
          list += (list.empty() ? "" : " ") + w[words.column("word")];
        }
        csv.field(scope).field(r + 1).field(ranked[r].first).field(ranked[r].second).field(list);
        csv.end_row();
      }
    }
  });
}

void copy_table(const fs::path& from, const fs::path& to) {
  const CsvTable t = read_table(from);
  write_file(to, [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row(t.header);
    for (const auto& row : t.rows) csv.row(row);
  });
}

void feature_table(const Context& ctx, const fs::path& out) {
  const CsvTable features = read_table(stage_dir(ctx, Stage::complexity) / "features.csv");
  const std::vector<std::string> names = {"H_mean", "ITV", "SWD", "FF", "HARM", "VARI"};
  write_file(out / "feature_table.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    std::vector<std::string> header{"category", "docs"};
    header.insert(header.end(), names.begin(), names.end());
    csv.row(header);
    for (const auto& [category, rows] : group_rows(features, "category")) {
      csv.field(category).field(rows.size());
      for (const auto& name : names) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto* row : rows) {
          const double v = cell((*row)[features.column(name)]);
          if (std::isnan(v)) continue;
          sum += v;
          ++n;
        }
        csv.field(n == 0 ? std::optional<double>() : std::optional<double>(sum / static_cast<double>(n)));
      }
      csv.end_row();
    }
  });
}

}  // namespace

void run_report(const Context& ctx) {
  const fs::path dir = stage_dir(ctx, Stage::report);
  const fs::path figs = dir / "figures";
  const fs::path tables = dir / "tables";
  fs::create_directories(figs);
  fs::create_directories(tables);
  sentiment_figures(ctx, figs);
  complexity_figures(ctx, figs);
  classify_figures(ctx, figs);
  top_topics_table(ctx, tables);
  feature_table(ctx, tables);
  const fs::path cx = stage_dir(ctx, Stage::complexity);
  copy_table(cx / "ff_ranking.csv", tables / "ff_ranking.csv");
  copy_table(cx / "decay_summary.csv", tables / "decay.csv");
  copy_table(cx / "anova.csv", tables / "anova.csv");
  copy_table(stage_dir(ctx, Stage::classify) / "summary.csv", tables / "classification.csv");
}

}  // namespace litstyle::cli::detail
