#include "litstyle/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "litstyle/assets.hpp"
#include "litstyle/csv.hpp"
#include "litstyle/error.hpp"

namespace litstyle {

LabelSet parse_label_set(std::string name, std::istream& in) {
  LabelSet set{std::move(name), {}};
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::string word = EmbeddingTable::fold(line.substr(b, e - b + 1));
    if (std::find(set.labels.begin(), set.labels.end(), word) == set.labels.end()) {
      set.labels.push_back(std::move(word));
    }
  }
  if (set.labels.empty()) throw Error(Errc::empty_input, "label set '" + set.name + "' is empty");
  return set;
}

LabelSet load_label_set(std::string name, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open label set " + path.string());
  return parse_label_set(std::move(name), in);
}

LabelSet builtin_label_set(std::string_view name) {
  std::string_view text;
  if (name == "positive") text = assets::positive();
  else if (name == "negative") text = assets::negative();
  else if (name == "happiness") text = assets::happiness();
  else if (name == "fear") text = assets::fear();
  else throw Error(Errc::invalid_argument, "no bundled label set '" + std::string(name) + "'");
  std::istringstream in{std::string(text)};
  return parse_label_set(std::string(name), in);
}

ResolvedLabels resolve_labels(const LabelSet& set, const EmbeddingTable& table) {
  ResolvedLabels out{set.name, {}, {}};
  for (const auto& word : set.labels) {
    const auto v = table.find(word);
    if (v && norm(*v) > 0.0) {
      out.vectors.push_back(*v);
    } else {
      out.dropped.push_back(word);
    }
  }
  if (out.vectors.empty()) {
    throw Error(Errc::all_oov, "no label of set '" + set.name + "' is in the embedding table");
  }
  return out;
}

double mean_cosine(std::span<const double> word, const ResolvedLabels& labels) {
  double s = 0.0;
  for (const auto& v : labels.vectors) s += cosine(word, v);
  return s / static_cast<double>(labels.vectors.size());
}

double aap(std::span<const double> word, const ResolvedLabels& positive,
           const ResolvedLabels& negative) {
  return mean_cosine(word, positive) - mean_cosine(word, negative);
}

EmotionNorm emotion_norm(const EmbeddingTable& table, const ResolvedLabels& labels) {
  std::vector<double> scores;
  scores.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto row = table.row(i);
    if (norm(row) > 0.0) scores.push_back(mean_cosine(row, labels));
  }
  if (scores.size() < 2) throw Error(Errc::empty_input, "too few vectors to normalize emotion scores");
  double m = 0.0;
  for (double s : scores) m += s;
  m /= static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - m) * (s - m);
  var /= static_cast<double>(scores.size());
  if (!(var > 0.0)) throw Error(Errc::invalid_argument, "emotion scores have zero variance");
  return {m, std::sqrt(var)};
}

double emotion_score(std::span<const double> word, const ResolvedLabels& labels,
                     const std::optional<EmotionNorm>& norm) {
  const double raw = mean_cosine(word, labels);
  return norm ? (raw - norm->mean) / norm->sd : raw;
}

SentimentScorer::SentimentScorer(const EmbeddingTable& table, const LabelSet& positive,
                                 const LabelSet& negative, const std::vector<LabelSet>& emotions,
                                 bool z_normalize)
    : table_(&table),
      positive_(resolve_labels(positive, table)),
      negative_(resolve_labels(negative, table)) {
  for (const auto& set : emotions) {
    emotions_.push_back(resolve_labels(set, table));
    emotion_names_.push_back(set.name);
    if (z_normalize) {
      norms_.push_back(emotion_norm(table, emotions_.back()));
    } else {
      norms_.push_back(std::nullopt);
    }
  }
  auto note = [&](const ResolvedLabels& r) {
    for (const auto& w : r.dropped) dropped_.push_back(r.name + ":" + w);
  };
  note(positive_);
  note(negative_);
  for (const auto& e : emotions_) note(e);
}

std::optional<std::span<const double>> SentimentScorer::usable(std::string_view word) const {
  auto v = table_->find(word);
  if (!v || !(norm(*v) > 0.0)) return std::nullopt;
  return v;
}

std::optional<double> SentimentScorer::aap(std::string_view word) const {
  const auto v = usable(word);
  if (!v) return std::nullopt;
  return litstyle::aap(*v, positive_, negative_);
}

std::optional<double> SentimentScorer::emotion(std::string_view word, std::size_t index) const {
  const auto v = usable(word);
  if (!v) return std::nullopt;
  return emotion_score(*v, emotions_.at(index), norms_.at(index));
}

SentimentProfile text_sentiment(const TokenStream& stream, const SentimentScorer& scorer) {
  const auto& names = scorer.emotion_names();
  SentimentProfile profile;
  profile.subject = stream.doc_id;
  std::vector<double> emotion_totals(names.size(), 0.0);
  double aap_total = 0.0;
  bool any_candidate = false;

  double s_aap = 0.0;
  std::vector<double> s_emo(names.size(), 0.0);
  std::size_t s_words = 0;
  auto flush = [&]() {
    if (s_words > 0) {
      aap_total += s_aap / static_cast<double>(s_words);
      for (std::size_t e = 0; e < names.size(); ++e) {
        emotion_totals[e] += s_emo[e] / static_cast<double>(s_words);
      }
      ++profile.n_items;
    }
    s_aap = 0.0;
    std::fill(s_emo.begin(), s_emo.end(), 0.0);
    s_words = 0;
  };
  for (std::size_t i = 0; i < stream.tokens.size(); ++i) {
    const Token& t = stream.tokens[i];
    if (i > 0 && t.sentence_index != stream.tokens[i - 1].sentence_index) flush();
    if (t.pos != Pos::noun && t.pos != Pos::verb) continue;
    any_candidate = true;
    const auto a = scorer.aap(t.lemma);
    if (!a) continue;
    s_aap += *a;
    for (std::size_t e = 0; e < names.size(); ++e) s_emo[e] += *scorer.emotion(t.lemma, e);
    ++s_words;
  }
  flush();
  if (!any_candidate) {
    throw Error(Errc::empty_input, stream.doc_id + ": no noun or verb to score");
  }
  if (profile.n_items == 0) {
    throw Error(Errc::all_oov, stream.doc_id + ": no sentence has an in-vocabulary noun or verb");
  }
  const double n = static_cast<double>(profile.n_items);
  profile.aap_mean = aap_total / n;
  for (std::size_t e = 0; e < names.size(); ++e) profile.emotions[names[e]] = emotion_totals[e] / n;
  return profile;
}

double topic_happiness(const TopicModel& model, std::size_t topic, const SentimentScorer& scorer,
                       std::size_t n) {
  double total = 0.0;
  std::size_t scored = 0;
  for (const auto& rw : top_words(model, topic, n)) {
    if (auto a = scorer.aap(rw.word)) {
      total += *a;
      ++scored;
    }
  }
  if (scored == 0) {
    throw Error(Errc::all_oov, "no top word of topic " + std::to_string(topic) + " has a vector");
  }
  return total / static_cast<double>(scored);
}

std::vector<SentimentProfile> aggregate_profiles(std::span<const GroupedProfile> profiles,
                                                 GroupKey key) {
  std::map<std::string, std::vector<const SentimentProfile*>> groups;
  for (const auto& g : profiles) {
    const std::string name = key == GroupKey::author ? g.author : std::string(to_string(g.category));
    groups[name].push_back(&g.profile);
  }
  std::vector<SentimentProfile> out;
  for (const auto& [name, members] : groups) {
    SentimentProfile agg;
    agg.subject = name;
    for (const auto* p : members) {
      agg.aap_mean += p->aap_mean;
      for (const auto& [emotion, value] : p->emotions) agg.emotions[emotion] += value;
    }
    const double n = static_cast<double>(members.size());
    agg.aap_mean /= n;
    for (auto& [emotion, value] : agg.emotions) value /= n;
    agg.n_items = members.size();
    out.push_back(std::move(agg));
  }
  std::stable_sort(out.begin(), out.end(), [](const SentimentProfile& a, const SentimentProfile& b) {
    return a.aap_mean > b.aap_mean;
  });
  return out;
}

void write_profiles_csv(std::ostream& out, std::span<const SentimentProfile> profiles) {
  CsvWriter csv(out);
  csv.row({"subject", "aap", "happiness", "fear", "n"});
  auto emotion = [](const SentimentProfile& p, const char* name) -> std::optional<double> {
    const auto it = p.emotions.find(name);
    if (it == p.emotions.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& p : profiles) {
    csv.field(p.subject).field(p.aap_mean).field(emotion(p, "happiness"))
        .field(emotion(p, "fear")).field(p.n_items);
    csv.end_row();
  }
}

}  // namespace litstyle
