#pragma once

// Internals shared by the stage implementations.

#include <cmath>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "litstyle/corpus.hpp"
#include "litstyle/csv.hpp"
#include "litstyle/sentiment.hpp"
#include "litstyle/vectorspace.hpp"
#include "pipeline.hpp"

namespace litstyle::cli::detail {

namespace fs = std::filesystem;

struct DocInfo {
  std::string id;
  std::string author;
  std::string title;
  Category category = Category::novels;
  std::string file;
};

struct LoadedCorpus {
  std::vector<DocInfo> docs;
  std::vector<TokenizedDocument> tokenized;  // parallel to docs
};

LoadedCorpus load_corpus(const fs::path& out);

// Writes through a temporary file so a failed stage never leaves half a file.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body);

CsvTable read_table(const fs::path& path);

// Empty cell -> NaN.
double cell(const std::string& text);
inline std::optional<double> opt(double v) {
  if (std::isnan(v)) return std::nullopt;
  return v;
}

void note(const Context& ctx, const std::string& message);

TaggerConfig tagger_from(const RunConfig& config);
EmbeddingTable load_table(const RunConfig& config);
SentimentScorer make_scorer(const RunConfig& config, const EmbeddingTable& table);

fs::path stage_dir(const Context& ctx, Stage stage);

void run_ingest(const Context& ctx);
void run_topics(const Context& ctx);
void run_sentiment(const Context& ctx);
void run_complexity(const Context& ctx);
void run_classify(const Context& ctx);
void run_report(const Context& ctx);

}  // namespace litstyle::cli::detail
