#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "litstyle/corpus.hpp"
#include "litstyle/stats.hpp"
#include "litstyle/vectorspace.hpp"

namespace litstyle {

// ---------------------------------------------------------------------------
// Vocabulary decay

// Shannon entropy (bits) of the empirical lemma distribution.
double shannon_entropy(std::span<const Token> tokens);

struct EntropyProfile {
  std::string doc_id;
  std::vector<double> h;  // one value per segment, log base 2
};

EntropyProfile segment_entropy(std::string doc_id, std::span<const Segment> segments);

// Trailing rolling mean; the first window-1 positions average the prefix
// available so far.
std::vector<double> smooth_rolling(std::span<const double> values, std::size_t window);

// z-scores with the population standard deviation. Throws on zero variance.
std::vector<double> standardize(std::span<const double> values);

// Means of n equal consecutive blocks; the length must be divisible by n.
std::vector<double> bucket_means(std::span<const double> values, std::size_t n);

struct DecayFit {
  FitResult fit;                  // cubic over bucket index 1..n
  std::vector<double> buckets;    // bucket means
  bool decaying = false;          // p < alpha and last bucket below first
};

DecayFit decay_fit(std::span<const double> profile, std::size_t n_buckets = 10,
                   double alpha = 0.05);

// ---------------------------------------------------------------------------
// Literariness: chunk-vector dispersion

// Mean squared Euclidean distance of chunk vectors to their centroid.
double intra_textual_variance(std::span<const Vector> chunks);

// Mean squared Euclidean distance between consecutive chunk vectors.
double stepwise_distance(std::span<const Vector> chunks);

// ---------------------------------------------------------------------------
// Creativity: forward flow

// Mean over words 2..n of the word's average (1 - cosine) distance to every
// preceding word. Zero vectors are skipped; throws Errc::empty_input when
// fewer than two usable vectors remain.
double forward_flow(std::span<const Vector> words);
double forward_flow(std::span<const std::span<const double>> words);

// Sentence-wise forward flow of the in-vocabulary lemmas, averaged over the
// sentences that have at least two of them.
double doc_forward_flow(const TokenStream& stream, const EmbeddingTable& table);

// ---------------------------------------------------------------------------
// Beauty: harmony and variety over topic distributions

// Hellinger distance; both inputs must sum to 1 within 1e-6.
double hellinger(std::span<const double> p, std::span<const double> q);

// Mean distance between the book distribution and each chapter's.
double harmony(std::span<const double> book, std::span<const std::vector<double>> chapters);

// Mean distance over all unordered chapter pairs.
double variety(std::span<const std::vector<double>> chapters);

bool beauty_predicate(double harmony, double variety);

struct BeautyAssessment {
  std::string doc_id;
  double harmony = 0.0;
  double variety = 0.0;
  bool beautiful = false;
};

BeautyAssessment assess_beauty(std::string doc_id, std::span<const double> book,
                               std::span<const std::vector<double>> chapters);

// Order (indices into `books`, most beautiful first). Books meeting the
// predicate come first; within each group the sum of the harmony rank
// (ascending, 1 = most harmonious) and the variety rank (descending, 1 = most
// varied) decides, then higher variety, then lower harmony, then doc_id.
std::vector<std::size_t> rank_beauty(std::span<const BeautyAssessment> books);

}  // namespace litstyle
