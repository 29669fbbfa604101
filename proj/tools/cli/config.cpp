#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "litstyle/csv.hpp"
#include "litstyle/error.hpp"

namespace litstyle::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_path_key(std::string_view key) {
  static constexpr std::string_view keys[] = {"corpus_dir",      "manifest",        "embeddings",
                                              "positive_labels", "negative_labels", "stopwords",
                                              "lexicon",         "output_dir"};
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& RunConfig::defaults() {
  // Empty values mean "unset": bundled assets for labels/stopwords/lexicon,
  // 50 / topics for lda_alpha.
  static const std::vector<std::pair<std::string, std::string>> d = {
      {"corpus_dir", "."},
      {"manifest", "manifest.csv"},
      {"embeddings", ""},
      {"positive_labels", ""},
      {"negative_labels", ""},
      {"emotion_labels", ""},
      {"stopwords", ""},
      {"lexicon", ""},
      {"drop_propn", "false"},
      {"chapter_pattern", ""},
      {"output_dir", "out"},
      {"seed", "1"},
      {"jobs", "1"},
      {"min_per_author_category", "5"},
      {"segments", "100"},
      {"smoothing_window", "10"},
      {"decay_buckets", "10"},
      {"decay_alpha", "0.05"},
      {"chunk_size", "1000"},
      {"max_oov_rate", "0.5"},
      {"topics", "50"},
      {"iterations", "2500"},
      {"lda_alpha", ""},
      {"lda_beta", "0.01"},
      {"min_freq", "100"},
      {"topic_pos", "NOUN,VERB"},
      {"topic_scope", "category"},
      {"top_words", "50"},
      {"inference_iterations", "200"},
      {"coherence_top_n", "10"},
      {"happiness_top_n", "50"},
      {"z_normalize_emotions", "true"},
      {"k_folds", "5"},
      {"stratified", "true"},
      {"tours", "10"},
      {"max_epochs", "2000"},
      {"l2_lambda", "0.01"},
      {"hidden1", "100"},
      {"hidden2", "25"},
      {"learning_rate", "0.1"},
      {"importance_repeats", "10"},
  };
  return d;
}

RunConfig::RunConfig() {
  const auto cwd = std::filesystem::current_path();
  for (const auto& [k, v] : defaults()) values_[k] = {v, cwd};
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open config file " + path.string());
  const auto base = std::filesystem::absolute(path).parent_path();
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string body = trim(line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::config, path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(body.substr(0, eq));
    if (!values_.contains(key)) {
      throw Error(Errc::config, path.string() + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    }
    values_[key] = {trim(body.substr(eq + 1)), base};
  }
}

void RunConfig::set(std::string_view key, std::string value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(Errc::config, "unknown config key '" + std::string(key) + "'");
  it->second = {trim(value), std::filesystem::current_path()};
}

void RunConfig::set_from_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(Errc::config, "expected key=value, got '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1)));
}

std::string RunConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(Errc::config, "unknown config key '" + std::string(key) + "'");
  return it->second.value;
}

long long RunConfig::get_int(std::string_view key) const {
  const std::string v = get(key);
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error(Errc::config, std::string(key) + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::size_t RunConfig::get_size(std::string_view key) const {
  const long long v = get_int(key);
  if (v < 0) throw Error(Errc::config, std::string(key) + " must not be negative");
  return static_cast<std::size_t>(v);
}

double RunConfig::get_double(std::string_view key) const {
  try {
    return parse_double(get(key));
  } catch (const Error&) {
    throw Error(Errc::config, std::string(key) + ": expected a number, got '" + get(key) + "'");
  }
}

std::optional<double> RunConfig::get_optional_double(std::string_view key) const {
  if (!has_value(key)) return std::nullopt;
  return get_double(key);
}

bool RunConfig::get_bool(std::string_view key) const {
  std::string v = get(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(Errc::config, std::string(key) + ": expected true or false, got '" + v + "'");
}

std::uint64_t RunConfig::seed() const {
  const long long s = get_int("seed");
  if (s < 0) throw Error(Errc::config, "seed must not be negative");
  return static_cast<std::uint64_t>(s);
}

std::filesystem::path RunConfig::get_path(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(Errc::config, "unknown config key '" + std::string(key) + "'");
  if (it->second.value.empty()) return {};
  std::filesystem::path p(it->second.value);
  if (p.is_relative()) p = it->second.base / p;
  return p.lexically_normal();
}

std::filesystem::path RunConfig::resolve_in(std::string_view key, const std::string& raw) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(Errc::config, "unknown config key '" + std::string(key) + "'");
  std::filesystem::path p(raw);
  if (p.is_relative()) p = it->second.base / p;
  return p.lexically_normal();
}

std::vector<std::string> RunConfig::get_list(std::string_view key, char separator) const {
  std::vector<std::string> out;
  const std::string v = get(key);
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto end = std::min(v.find(separator, start), v.size());
    std::string item = trim(std::string_view(v).substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

std::string RunConfig::hash(const std::vector<std::string>& keys) const {
  std::vector<std::string> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& k : sorted) {
    feed(k);
    feed("=");
    feed(is_path_key(k) ? get_path(k).string() : get(k));
    feed("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace litstyle::cli
