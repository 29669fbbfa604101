#include "pipeline.hpp"

#include <chrono>
#include <limits>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "litstyle/error.hpp"
#include "stages.hpp"

namespace litstyle::cli {

namespace fs = std::filesystem;

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::topics: return "topics";
    case Stage::sentiment: return "sentiment";
    case Stage::complexity: return "complexity";
    case Stage::classify: return "classify";
    case Stage::report: return "report";
  }
  return "?";
}

std::vector<std::string> stage_keys(Stage stage) {
  std::vector<std::string> keys = {"corpus_dir", "manifest", "min_per_author_category",
                                   "stopwords", "lexicon", "drop_propn", "chapter_pattern"};
  if (stage == Stage::ingest) return keys;
  keys.insert(keys.end(), {"topics", "iterations", "lda_alpha", "lda_beta", "min_freq", "topic_pos",
                           "topic_scope", "top_words", "inference_iterations", "coherence_top_n",
                           "seed"});
  if (stage == Stage::topics) return keys;
  const std::vector<std::string> sentiment = {"embeddings", "positive_labels", "negative_labels",
                                              "emotion_labels", "happiness_top_n",
                                              "z_normalize_emotions"};
  const std::vector<std::string> complexity = {"embeddings", "segments", "smoothing_window",
                                               "decay_buckets", "decay_alpha", "chunk_size",
                                               "max_oov_rate"};
  const std::vector<std::string> classify = {"k_folds", "stratified", "tours", "max_epochs",
                                             "l2_lambda", "hidden1", "hidden2", "learning_rate",
                                             "importance_repeats"};
  if (stage == Stage::sentiment) {
    keys.insert(keys.end(), sentiment.begin(), sentiment.end());
    return keys;
  }
  keys.insert(keys.end(), complexity.begin(), complexity.end());
  if (stage == Stage::complexity) return keys;
  keys.insert(keys.end(), classify.begin(), classify.end());
  if (stage == Stage::classify) return keys;
  keys.insert(keys.end(), sentiment.begin(), sentiment.end());
  return keys;
}

namespace {

std::vector<Stage> upstream(Stage stage) {
  switch (stage) {
    case Stage::ingest: return {};
    case Stage::topics: return {Stage::ingest};
    case Stage::sentiment: return {Stage::ingest, Stage::topics};
    case Stage::complexity: return {Stage::ingest, Stage::topics};
    case Stage::classify: return {Stage::complexity};
    case Stage::report:
      return {Stage::ingest, Stage::topics, Stage::sentiment, Stage::complexity, Stage::classify};
  }
  return {};
}

void require(const fs::path& p, const std::string& what, bool directory = false) {
  if (p.empty()) throw Error(Errc::config, what + " is not set");
  std::error_code ec;
  const bool ok = directory ? fs::is_directory(p, ec) : fs::is_regular_file(p, ec);
  if (!ok) throw Error(Errc::io, what + " not found: " + p.string());
}

std::optional<std::string> read_stamp(const fs::path& dir) {
  std::ifstream in(dir / "stage.json", std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    return j.at("config_hash").get<std::string>();
  } catch (const std::exception&) {
    return std::string("unreadable");
  }
}

}  // namespace

void preflight(const Context& ctx, std::span<const Stage> stages) {
  const RunConfig& c = ctx.config;
  bool need_corpus = false;
  bool need_embeddings = false;
  bool need_labels = false;
  for (Stage s : stages) {
    need_corpus |= s == Stage::ingest;
    need_embeddings |= s == Stage::sentiment || s == Stage::complexity;
    need_labels |= s == Stage::sentiment;
  }
  if (need_corpus) {
    require(c.get_path("corpus_dir"), "corpus_dir", true);
    require(c.get_path("manifest"), "manifest");
    if (c.has_value("stopwords")) require(c.get_path("stopwords"), "stopwords");
    if (c.has_value("lexicon")) require(c.get_path("lexicon"), "lexicon");
  }
  if (need_embeddings) require(c.get_path("embeddings"), "embeddings");
  if (need_labels) {
    if (c.has_value("positive_labels")) require(c.get_path("positive_labels"), "positive_labels");
    if (c.has_value("negative_labels")) require(c.get_path("negative_labels"), "negative_labels");
    for (const auto& item : c.get_list("emotion_labels")) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) continue;  // bundled set by name
      require(c.resolve_in("emotion_labels", item.substr(colon + 1)),
              "emotion label set '" + item.substr(0, colon) + "'");
    }
  }
}

void run_stage(const Context& ctx, Stage stage) {
  const std::string name(stage_name(stage));
  for (Stage up : upstream(stage)) {
    const fs::path dir = detail::stage_dir(ctx, up);
    const auto stamp = read_stamp(dir);
    if (!stamp) {
      throw Error(Errc::config, "stage '" + name + "' needs the outputs of '" +
                                    std::string(stage_name(up)) + "'; run `litstyle " +
                                    std::string(stage_name(up)) + "` first");
    }
    const std::string expected = ctx.config.hash(stage_keys(up));
    if (*stamp != expected && !ctx.force) {
      throw Error(Errc::stale_cache, "cached '" + std::string(stage_name(up)) +
                                         "' outputs were produced with a different configuration (" +
                                         *stamp + " vs " + expected +
                                         "); rerun that stage or pass --force");
    }
  }
  const fs::path dir = detail::stage_dir(ctx, stage);
  const std::string hash = ctx.config.hash(stage_keys(stage));
  if (const auto stamp = read_stamp(dir)) {
    if (*stamp != hash && !ctx.force) {
      throw Error(Errc::stale_cache, dir.string() + " holds outputs of a different configuration (" +
                                         *stamp + " vs " + hash + "); pass --force to replace them");
    }
    fs::remove_all(dir);
  }
  fs::create_directories(dir);

  const auto started = std::chrono::steady_clock::now();
  detail::note(ctx, "[" + name + "] running");
  switch (stage) {
    case Stage::ingest: detail::run_ingest(ctx); break;
    case Stage::topics: detail::run_topics(ctx); break;
    case Stage::sentiment: detail::run_sentiment(ctx); break;
    case Stage::complexity: detail::run_complexity(ctx); break;
    case Stage::classify: detail::run_classify(ctx); break;
    case Stage::report: detail::run_report(ctx); break;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  nlohmann::json stamp_json;
  stamp_json["stage"] = name;
  stamp_json["config_hash"] = hash;
  stamp_json["seed"] = ctx.config.seed();
  stamp_json["format_version"] = 1;
  detail::write_file(dir / "stage.json", [&](std::ostream& o) { o << stamp_json.dump(1) << "\n"; });

  // Timings vary between runs, so they live in run.log rather than in the
  // CSV/JSON outputs.
  nlohmann::json line;
  line["stage"] = name;
  line["config_hash"] = hash;
  line["seed"] = ctx.config.seed();
  line["jobs"] = ctx.jobs;
  line["seconds"] = seconds;
  std::ofstream log(ctx.out / "run.log", std::ios::app | std::ios::binary);
  log << line.dump() << "\n";
  detail::note(ctx, "[" + name + "] done in " + format_fixed(seconds, 2) + " s");
}

// ---------------------------------------------------------------------------

namespace detail {

fs::path stage_dir(const Context& ctx, Stage stage) { return ctx.out / std::string(stage_name(stage)); }

void note(const Context& ctx, const std::string& message) {
  if (ctx.progress) *ctx.progress << message << "\n";
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw Error(Errc::io, "write failed: " + path.string());
  }
  fs::rename(tmp, path);
}

CsvTable read_table(const fs::path& path) { return read_csv_file(path.string()); }

double cell(const std::string& text) {
  if (text.empty()) return std::numeric_limits<double>::quiet_NaN();
  return parse_double(text);
}

TaggerConfig tagger_from(const RunConfig& config) {
  TaggerConfig t = TaggerConfig::builtin();
  if (config.has_value("lexicon")) {
    t.lexicon = std::make_shared<const Lexicon>(Lexicon::load(config.get_path("lexicon")));
  }
  if (config.has_value("stopwords")) {
    t.stopwords = std::make_shared<const WordSet>(load_word_list(config.get_path("stopwords")));
  }
  t.drop_propn = config.get_bool("drop_propn");
  return t;
}

EmbeddingTable load_table(const RunConfig& config) { return load_embeddings(config.get_path("embeddings")); }

SentimentScorer make_scorer(const RunConfig& config, const EmbeddingTable& table) {
  auto labels = [&](const char* key, const char* builtin) {
    return config.has_value(key) ? load_label_set(builtin, config.get_path(key)) : builtin_label_set(builtin);
  };
  std::vector<LabelSet> emotions;
  const auto items = config.get_list("emotion_labels");
  if (items.empty()) {
    emotions.push_back(builtin_label_set("happiness"));
    emotions.push_back(builtin_label_set("fear"));
  }
  for (const auto& item : items) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      emotions.push_back(builtin_label_set(item));
    } else {
      emotions.push_back(load_label_set(item.substr(0, colon),
                                        config.resolve_in("emotion_labels", item.substr(colon + 1))));
    }
  }
  return SentimentScorer(table, labels("positive_labels", "positive"), labels("negative_labels", "negative"),
                         emotions, config.get_bool("z_normalize_emotions"));
}

LoadedCorpus load_corpus(const fs::path& out) {
  const fs::path dir = out / "ingest";
  LoadedCorpus corpus;
  const CsvTable docs = read_table(dir / "documents.csv");
  const auto c_id = docs.column("doc_id");
  const auto c_author = docs.column("author");
  const auto c_title = docs.column("title");
  const auto c_category = docs.column("category");
  const auto c_file = docs.column("file");
  std::map<std::string, std::size_t> index;
  for (const auto& row : docs.rows) {
    index[row[c_id]] = corpus.docs.size();
    corpus.docs.push_back({row[c_id], row[c_author], row[c_title], parse_category(row[c_category]),
                           row[c_file]});
    TokenizedDocument td;
    td.stream.doc_id = row[c_id];
    corpus.tokenized.push_back(std::move(td));
  }

  std::ifstream in(dir / "tokens.tsv", std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + (dir / "tokens.tsv").string());
  std::string line;
  std::getline(in, line);  // header
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::string f[5];
    std::size_t start = 0;
    for (int i = 0; i < 5; ++i) {
      const auto tab = i < 4 ? line.find('\t', start) : line.size();
      if (tab == std::string::npos) {
        throw Error(Errc::parse, "tokens.tsv:" + std::to_string(number) + ": expected 5 columns");
      }
      f[i] = line.substr(start, tab - start);
      start = tab + 1;
    }
    const auto it = index.find(f[0]);
    if (it == index.end()) {
      throw Error(Errc::parse, "tokens.tsv:" + std::to_string(number) + ": unknown document " + f[0]);
    }
    corpus.tokenized[it->second].stream.tokens.push_back(
        {f[2], f[3], parse_pos(f[4]), static_cast<std::size_t>(parse_double(f[1]))});
  }

  const CsvTable chapters = read_table(dir / "chapters.csv");
  const auto h_id = chapters.column("doc_id");
  const auto h_index = chapters.column("chapter");
  const auto h_heading = chapters.column("heading");
  const auto h_begin = chapters.column("begin");
  const auto h_end = chapters.column("end");
  for (const auto& row : chapters.rows) {
    auto& td = corpus.tokenized.at(index.at(row[h_id]));
    td.chapterless = false;
    td.chapters.push_back({static_cast<std::size_t>(parse_double(row[h_index])), row[h_heading],
                           static_cast<std::size_t>(parse_double(row[h_begin])),
                           static_cast<std::size_t>(parse_double(row[h_end]))});
  }
  return corpus;
}

}  // namespace detail

}  // namespace litstyle::cli
