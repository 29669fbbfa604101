#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litstyle/corpus.hpp"

namespace litstyle {

struct VocabOptions {
  std::size_t min_freq = 100;
  std::vector<Pos> pos_set = {Pos::noun, Pos::verb};
  bool exclude_propn = true;

  bool admits(Pos pos) const;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> words, std::vector<std::size_t> frequencies,
             std::vector<std::size_t> doc_frequencies, VocabOptions options);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(std::size_t id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t frequency(std::size_t id) const { return frequencies_[id]; }
  std::size_t doc_frequency(std::size_t id) const { return doc_frequencies_[id]; }
  const VocabOptions& options() const { return options_; }
  std::optional<std::uint32_t> id(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> frequencies_;
  std::vector<std::size_t> doc_frequencies_;
  VocabOptions options_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Lemmas with an admitted POS and corpus frequency >= min_freq. Ids follow
// descending frequency, ties broken lexicographically. Throws
// Errc::empty_vocabulary when nothing qualifies.
Vocabulary build_vocab(std::span<const std::span<const Token>> documents,
                       const VocabOptions& options = {});
Vocabulary build_vocab(std::span<const TokenStream> documents,
                       const VocabOptions& options = {});

// Word-id sequence of a document.
using DocBow = std::vector<std::uint32_t>;

DocBow to_bow(std::span<const Token> tokens, const Vocabulary& vocab);

struct LdaConfig {
  std::size_t topics = 50;
  std::size_t iterations = 2500;
  std::optional<double> alpha;  // defaults to 50 / topics
  double beta = 0.01;
  std::uint64_t seed = 1;

  double alpha_value() const { return alpha ? *alpha : 50.0 / static_cast<double>(topics); }
};

struct TopicDistribution {
  std::vector<double> probabilities;
  // Topics below this probability are flagged in reports, never zeroed.
  double report_threshold = 0.001;

  std::vector<std::size_t> reported_topics() const;
};

class TopicModel {
 public:
  TopicModel() = default;
  TopicModel(Vocabulary vocab, std::size_t topics, std::size_t docs, double alpha,
             double beta, std::uint64_t seed, std::size_t iterations);

  std::size_t num_topics() const { return topics_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t num_docs() const { return docs_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t iterations() const { return iterations_; }

  std::uint32_t topic_word(std::size_t k, std::size_t w) const { return topic_word_[k * vocab_size() + w]; }
  std::uint32_t topic_total(std::size_t k) const { return topic_total_[k]; }
  std::uint32_t doc_topic(std::size_t d, std::size_t k) const { return doc_topic_[d * topics_ + k]; }
  std::uint32_t doc_length(std::size_t d) const { return doc_length_[d]; }

  // Smoothed, normalized rows.
  std::vector<double> topic_word_distribution(std::size_t k) const;
  TopicDistribution doc_topic_distribution(std::size_t d) const;

  // Sum of every count matrix, for conservation checks.
  std::uint64_t total_topic_word() const;
  std::uint64_t total_doc_topic() const;

  friend class LdaSampler;
  friend TopicModel topic_model_from_json(std::string_view);

 private:
  Vocabulary vocab_;
  std::size_t topics_ = 0;
  std::size_t docs_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::uint64_t seed_ = 0;
  std::size_t iterations_ = 0;
  std::vector<std::uint32_t> topic_word_;  // K x V
  std::vector<std::uint32_t> topic_total_;  // K
  std::vector<std::uint32_t> doc_topic_;   // D x K
  std::vector<std::uint32_t> doc_length_;  // D
};

// Called after each full sweep with the 1-based sweep number.
using SweepObserver = std::function<void(std::size_t sweep, const TopicModel& state)>;

// Collapsed Gibbs sampling for `config.iterations` sweeps; deterministic in
// config.seed. Throws Errc::invalid_argument if topics > vocabulary size.
TopicModel fit_lda(std::span<const DocBow> docs, const Vocabulary& vocab,
                   const LdaConfig& config, const SweepObserver& observer = {});

struct RankedWord {
  std::string word;
  double probability = 0.0;
};

// Highest-probability words of a topic, ties broken lexicographically.
std::vector<RankedWord> top_words(const TopicModel& model, std::size_t topic, std::size_t n = 50);

// Fold-in sampling with the model's topic-word counts held fixed. The result
// averages the document's topic proportions over the second half of the
// sweeps. Throws Errc::all_oov for a document with no model word.
TopicDistribution infer_topics(const TopicModel& model, const DocBow& doc,
                               std::size_t iterations, std::uint64_t seed);

// UMass coherence of each topic's top words against document co-occurrence.
std::vector<double> coherence_umass_per_topic(const TopicModel& model,
                                              std::span<const DocBow> docs,
                                              std::size_t top_n = 10);
double coherence_umass(const TopicModel& model, std::span<const DocBow> docs,
                       std::size_t top_n = 10);

std::string topic_model_to_json(const TopicModel& model);
TopicModel topic_model_from_json(std::string_view json);

}  // namespace litstyle
