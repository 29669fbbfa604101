#include "litstyle/vectorspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "litstyle/csv.hpp"
#include "litstyle/error.hpp"

namespace litstyle {

namespace {

void require_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::dimension_mismatch,
                "vector dimensions differ: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
}

}  // namespace

std::string EmbeddingTable::fold(std::string_view word) {
  std::string out(word);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool EmbeddingTable::add(std::string_view word, std::span<const double> values) {
  if (values.size() != dim_) {
    throw Error(Errc::dimension_mismatch, "embedding for '" + std::string(word) +
                                              "' has dimension " +
                                              std::to_string(values.size()));
  }
  auto [it, inserted] = index_.try_emplace(fold(word), words_.size());
  if (!inserted) {
    ++duplicates_;
    return false;
  }
  words_.push_back(it->first);
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
  const auto it = index_.find(fold(word));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& message) -> Error {
    return Error(Errc::parse, "embeddings line " + std::to_string(line_no) + ": " + message);
  };
  if (!std::getline(in, line)) throw Error(Errc::parse, "embeddings file is empty");
  ++line_no;
  std::istringstream header(line);
  long long count = -1;
  long long dim = -1;
  if (!(header >> count >> dim) || count < 0 || dim <= 0) {
    throw fail("header must be `count dim`");
  }
  EmbeddingTable table(static_cast<std::size_t>(dim));
  std::vector<double> values(static_cast<std::size_t>(dim));
  long long rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string_view rest(line);
    auto next_field = [&]() -> std::string_view {
      const auto b = rest.find_first_not_of(" \t");
      if (b == std::string_view::npos) {
        rest = {};
        return {};
      }
      rest.remove_prefix(b);
      const auto e = rest.find_first_of(" \t");
      const auto field = rest.substr(0, e);
      rest.remove_prefix(e == std::string_view::npos ? rest.size() : e);
      return field;
    };
    const std::string_view word = next_field();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto field = next_field();
      if (field.empty()) throw fail("expected " + std::to_string(dim) + " components");
      try {
        values[i] = parse_double(field);
      } catch (const Error&) {
        throw fail("bad component '" + std::string(field) + "'");
      }
      if (!std::isfinite(values[i])) throw fail("non-finite component");
    }
    if (!next_field().empty()) throw fail("more than " + std::to_string(dim) + " components");
    ++rows;
    if (rows > count) throw fail("more rows than the header count " + std::to_string(count));
    table.add(word, values);
  }
  if (rows != count) {
    throw Error(Errc::parse, "embeddings header declares " + std::to_string(count) +
                                 " rows, file has " + std::to_string(rows));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open embeddings " + path.string());
  return read_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.word(i);
    for (double v : table.row(i)) out << ' ' << format_double(v);
    out << '\n';
  }
}

Vector centroid(std::span<const Vector> vectors) {
  if (vectors.empty()) throw Error(Errc::empty_input, "centroid of an empty list");
  Vector mean(vectors.front().size(), 0.0);
  for (const auto& v : vectors) {
    require_same_dim(mean, v);
    for (std::size_t i = 0; i < v.size(); ++i) mean[i] += v[i];
  }
  const double n = static_cast<double>(vectors.size());
  for (double& m : mean) m /= n;
  return mean;
}

ChunkVector chunk_vector(std::span<const Token> chunk, const EmbeddingTable& table) {
  if (chunk.empty()) throw Error(Errc::empty_input, "empty chunk");
  ChunkVector out{Vector(table.dim(), 0.0), 0.0};
  std::size_t covered = 0;
  for (const auto& token : chunk) {
    const auto v = table.find(token.lemma);
    if (!v) continue;
    ++covered;
    for (std::size_t i = 0; i < v->size(); ++i) out.vector[i] += (*v)[i];
  }
  if (covered == 0) throw Error(Errc::all_oov, "every token in the chunk is out of vocabulary");
  for (double& x : out.vector) x /= static_cast<double>(covered);
  out.oov_rate = static_cast<double>(chunk.size() - covered) / static_cast<double>(chunk.size());
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(Errc::zero_vector, "cosine of a zero vector");
  const double c = dot(a, b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double sq_euclidean(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  return 1.0 - cosine(a, b);
}

}  // namespace litstyle
