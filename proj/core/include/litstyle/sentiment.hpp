#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "litstyle/corpus.hpp"
#include "litstyle/topics.hpp"
#include "litstyle/vectorspace.hpp"

namespace litstyle {

struct LabelSet {
  std::string name;
  std::vector<std::string> labels;
};

// One label per line, `#` comments.
LabelSet parse_label_set(std::string name, std::istream& in);
LabelSet load_label_set(std::string name, const std::filesystem::path& path);
// "positive", "negative", "happiness" or "fear" from the bundled assets.
LabelSet builtin_label_set(std::string_view name);

// Label vectors found in the table. Labels without a (non-zero) vector are
// listed in `dropped`; throws Errc::all_oov when none survive.
struct ResolvedLabels {
  std::string name;
  std::vector<std::span<const double>> vectors;
  std::vector<std::string> dropped;
};

ResolvedLabels resolve_labels(const LabelSet& set, const EmbeddingTable& table);

double mean_cosine(std::span<const double> word, const ResolvedLabels& labels);

// Mean cosine to the positive labels minus mean cosine to the negative ones.
double aap(std::span<const double> word, const ResolvedLabels& positive,
           const ResolvedLabels& negative);

struct EmotionNorm {
  double mean = 0.0;
  double sd = 1.0;
};

// Distribution of the raw emotion score over every non-zero table vector.
EmotionNorm emotion_norm(const EmbeddingTable& table, const ResolvedLabels& labels);

double emotion_score(std::span<const double> word, const ResolvedLabels& labels,
                     const std::optional<EmotionNorm>& norm);

// Word-level scoring against one embedding table and a fixed set of label
// sets. Holds references to the table, which must outlive the scorer.
class SentimentScorer {
 public:
  SentimentScorer(const EmbeddingTable& table, const LabelSet& positive,
                  const LabelSet& negative, const std::vector<LabelSet>& emotions,
                  bool z_normalize = true);

  const EmbeddingTable& table() const { return *table_; }
  const std::vector<std::string>& emotion_names() const { return emotion_names_; }
  // Labels that had no vector, as "set:word".
  const std::vector<std::string>& dropped_labels() const { return dropped_; }

  // nullopt for out-of-vocabulary (or zero-vector) words.
  std::optional<double> aap(std::string_view word) const;
  std::optional<double> emotion(std::string_view word, std::size_t index) const;

 private:
  std::optional<std::span<const double>> usable(std::string_view word) const;

  const EmbeddingTable* table_;
  ResolvedLabels positive_;
  ResolvedLabels negative_;
  std::vector<ResolvedLabels> emotions_;
  std::vector<std::optional<EmotionNorm>> norms_;
  std::vector<std::string> emotion_names_;
  std::vector<std::string> dropped_;
};

struct SentimentProfile {
  std::string subject;
  double aap_mean = 0.0;
  std::map<std::string, double> emotions;
  std::size_t n_items = 0;
};

// Per sentence, the mean score of the in-vocabulary noun and verb lemmas;
// then the mean over sentences that had any. n_items counts those sentences.
SentimentProfile text_sentiment(const TokenStream& stream, const SentimentScorer& scorer);

// Mean AAP over the topic's top `n` words that the table covers.
double topic_happiness(const TopicModel& model, std::size_t topic,
                       const SentimentScorer& scorer, std::size_t n = 50);

enum class GroupKey { author, category };

struct GroupedProfile {
  SentimentProfile profile;
  std::string author;
  Category category = Category::novels;
};

// Mean profile per group, sorted by aap_mean descending (ties by subject).
std::vector<SentimentProfile> aggregate_profiles(std::span<const GroupedProfile> profiles,
                                                 GroupKey key);

// CSV `subject,aap,happiness,fear,n`.
void write_profiles_csv(std::ostream& out, std::span<const SentimentProfile> profiles);

}  // namespace litstyle
