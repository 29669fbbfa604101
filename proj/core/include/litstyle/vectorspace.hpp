#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litstyle/corpus.hpp"

namespace litstyle {

using Vector = std::vector<double>;

// Word-embedding table, immutable once loaded. Words are stored lowercased so
// that lookups agree with the tokenizer's lemmas.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  // Rows dropped at load time because the (case-folded) word was seen before.
  std::size_t duplicate_count() const { return duplicates_; }

  // Returns false (and keeps the first vector) if the word already exists.
  bool add(std::string_view word, std::span<const double> values);

  std::optional<std::span<const double>> find(std::string_view word) const;
  bool contains(std::string_view word) const { return index_.contains(fold(word)); }

  const std::string& word(std::size_t row) const { return words_[row]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  static std::string fold(std::string_view word);

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_ = 0;
};

// Text format: header `count dim`, then `word v1 ... v_dim` per line.
EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void write_embeddings(std::ostream& out, const EmbeddingTable& table);

Vector centroid(std::span<const Vector> vectors);

struct ChunkVector {
  Vector vector;
  double oov_rate = 0.0;
};

// Mean embedding of the in-vocabulary lemmas; throws Errc::all_oov when no
// lemma is covered.
ChunkVector chunk_vector(std::span<const Token> chunk, const EmbeddingTable& table);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
// Throws Errc::zero_vector for a zero-norm argument.
double cosine(std::span<const double> a, std::span<const double> b);
double sq_euclidean(std::span<const double> a, std::span<const double> b);

// 1 - cosine: the word-to-word semantic distance used by forward flow.
double cosine_distance(std::span<const double> a, std::span<const double> b);

}  // namespace litstyle
