#pragma once

// Synthetic data with known generative structure, shared by the tests, the
// benchmarks and the `litstyle-synth` fixture writer.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "litstyle/corpus.hpp"
#include "litstyle/learn.hpp"
#include "litstyle/topics.hpp"
#include "litstyle/vectorspace.hpp"

namespace litstyle::synth {

// ---------------------------------------------------------------------------
// Feature tables

struct BlobSpec {
  std::size_t classes = 4;
  std::size_t per_class = 200;
  std::size_t features = 5;
  // Distance between any two class centres, in units of the (unit) noise sd.
  double separation = 5.0;
  std::size_t noise_features = 0;  // appended pure N(0, 1) columns
  std::uint64_t seed = 1;
};

// Class c is centred at (separation / sqrt 2) * e_(c mod features).
FeatureTable gaussian_blobs(const BlobSpec& spec);

// Two classes that differ only in the first column ("signal"), plus
// `noise_features` uninformative columns.
FeatureTable one_signal_table(std::size_t per_class, std::size_t noise_features,
                              double separation, std::uint64_t seed);

// Same rows, labels permuted.
FeatureTable shuffle_labels(FeatureTable table, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Token streams

// Lemmas become NOUN tokens; every `sentence_length` tokens start a sentence.
TokenStream stream_from_lemmas(std::string doc_id, const std::vector<std::string>& lemmas,
                               std::size_t sentence_length = 10);

struct TopicCorpus {
  std::vector<TokenStream> streams;
  Vocabulary vocab;
  std::vector<DocBow> docs;
  std::vector<std::vector<std::string>> topic_words;  // true vocabulary per topic
  std::vector<std::size_t> dominant_topic;            // per document
};

struct TopicCorpusSpec {
  std::size_t topics = 3;
  std::size_t words_per_topic = 50;
  std::size_t docs = 300;
  std::size_t doc_length = 100;
  // Probability that a token is drawn from the document's dominant topic; the
  // rest is spread evenly over the other topics. 1 gives single-topic docs.
  double dominant_share = 0.8;
  std::uint64_t seed = 1;
};

// Topics have disjoint vocabularies ("t<k>w<j>") with Zipf-like word weights.
TopicCorpus disjoint_topic_corpus(const TopicCorpusSpec& spec);

struct DecaySpec {
  std::size_t tokens = 5000;
  std::size_t segments = 100;
  std::size_t pool = 200;      // word types available in every segment (controls)
  std::size_t final_pool = 20; // types available in the last segment (contracting)
};

// Word draws are uniform over a pool; a contracting text shrinks its pool
// linearly across segments, a stationary control keeps it fixed.
TokenStream decay_text(std::string doc_id, bool contracting, const DecaySpec& spec,
                       std::uint64_t seed);

// Texts whose segments differ in lexical diversity: segment pool sizes are
// spread between `min_pool` and `max_pool`.
std::vector<TokenStream> diversity_gradient_corpus(std::size_t docs, std::size_t segments,
                                                   std::size_t segment_tokens, std::size_t min_pool,
                                                   std::size_t max_pool, std::uint64_t seed);

// Random vectors with i.i.d. N(0, 1) components.
std::vector<Vector> random_vectors(std::size_t count, std::size_t dim, std::uint64_t seed);

// A random point of the probability simplex.
std::vector<double> random_distribution(std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fixture corpus

struct FixtureSpec {
  std::size_t authors_per_category = 2;
  std::size_t docs_per_author = 5;
  std::size_t chapters = 5;
  std::size_t sentences_per_chapter = 150;
  std::size_t dim = 50;
  std::uint64_t seed = 1;
};

struct FixtureFiles {
  std::filesystem::path config;
  std::filesystem::path manifest;
  std::filesystem::path embeddings;
  std::size_t documents = 0;
};

// Writes a small six-category corpus under `dir`: texts/, manifest.csv,
// embeddings.txt, labels/*.txt and litstyle.conf (scaled-down settings).
// Children, essays, novels and stories have chapter headings; plays and poems
// do not. Children's books and novels contract their vocabulary toward the
// end.
FixtureFiles write_fixture_corpus(const std::filesystem::path& dir, const FixtureSpec& spec = {});

}  // namespace litstyle::synth
