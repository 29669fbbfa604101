#include "litstyle/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include "litstyle/error.hpp"

namespace litstyle {

double shannon_entropy(std::span<const Token> tokens) {
  if (tokens.empty()) throw Error(Errc::empty_input, "entropy of an empty segment");
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t.lemma];
  // Sum in a fixed order so the result does not depend on hash iteration.
  std::vector<std::size_t> freq;
  freq.reserve(counts.size());
  for (const auto& [lemma, c] : counts) freq.push_back(c);
  std::sort(freq.begin(), freq.end());
  const double n = static_cast<double>(tokens.size());
  double h = 0.0;
  for (std::size_t c : freq) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

EntropyProfile segment_entropy(std::string doc_id, std::span<const Segment> segments) {
  EntropyProfile profile{std::move(doc_id), {}};
  profile.h.reserve(segments.size());
  for (const auto& s : segments) profile.h.push_back(shannon_entropy(s.tokens));
  return profile;
}

std::vector<double> smooth_rolling(std::span<const double> values, std::size_t window) {
  if (window == 0 || window > values.size()) {
    throw Error(Errc::invalid_argument, "rolling window must be in [1, length]");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t count = std::min(i + 1, window);
    double sum = 0.0;
    for (std::size_t j = i + 1 - count; j <= i; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(count);
  }
  return out;
}

std::vector<double> standardize(std::span<const double> values) {
  const double m = mean(values);
  const double sd = std::sqrt(variance(values));
  if (!(sd > 0.0)) throw Error(Errc::invalid_argument, "cannot standardize a constant profile");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - m) / sd;
  return out;
}

std::vector<double> bucket_means(std::span<const double> values, std::size_t n) {
  if (n == 0 || values.size() < n || values.size() % n != 0) {
    throw Error(Errc::invalid_argument, "profile length " + std::to_string(values.size()) +
                                            " is not divisible into " + std::to_string(n) +
                                            " buckets");
  }
  const std::size_t width = values.size() / n;
  std::vector<double> out(n);
  for (std::size_t b = 0; b < n; ++b) out[b] = mean(values.subspan(b * width, width));
  return out;
}

DecayFit decay_fit(std::span<const double> profile, std::size_t n_buckets, double alpha) {
  DecayFit out;
  out.buckets = bucket_means(profile, n_buckets);
  std::vector<double> x(n_buckets);
  std::iota(x.begin(), x.end(), 1.0);
  out.fit = polyfit(x, out.buckets, 3);
  out.decaying = out.fit.p_value < alpha && out.buckets.back() < out.buckets.front();
  return out;
}

// ---------------------------------------------------------------------------

double intra_textual_variance(std::span<const Vector> chunks) {
  const Vector mu = centroid(chunks);
  double s = 0.0;
  for (const auto& t : chunks) s += sq_euclidean(mu, t);
  return s / static_cast<double>(chunks.size());
}

double stepwise_distance(std::span<const Vector> chunks) {
  if (chunks.size() < 2) {
    throw Error(Errc::empty_input, "stepwise distance needs at least 2 chunks");
  }
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < chunks.size(); ++i) s += sq_euclidean(chunks[i], chunks[i + 1]);
  return s / static_cast<double>(chunks.size() - 1);
}

// ---------------------------------------------------------------------------

double forward_flow(std::span<const std::span<const double>> words) {
  std::vector<std::span<const double>> usable;
  std::vector<double> norms;
  for (const auto& w : words) {
    const double n = norm(w);
    if (n > 0.0) {
      usable.push_back(w);
      norms.push_back(n);
    }
  }
  if (usable.size() < 2) {
    throw Error(Errc::empty_input, "forward flow needs at least 2 non-zero word vectors");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < usable.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c = std::clamp(dot(usable[i], usable[j]) / (norms[i] * norms[j]), -1.0, 1.0);
      inner += 1.0 - c;
    }
    total += inner / static_cast<double>(i);
  }
  return total / static_cast<double>(usable.size() - 1);
}

double forward_flow(std::span<const Vector> words) {
  std::vector<std::span<const double>> views(words.begin(), words.end());
  return forward_flow(std::span<const std::span<const double>>(views));
}

double doc_forward_flow(const TokenStream& stream, const EmbeddingTable& table) {
  double total = 0.0;
  std::size_t scored = 0;
  std::vector<std::span<const double>> sentence;
  auto flush = [&]() {
    std::size_t nonzero = 0;
    for (const auto& v : sentence) nonzero += norm(v) > 0.0 ? 1 : 0;
    if (nonzero >= 2) {
      total += forward_flow(std::span<const std::span<const double>>(sentence));
      ++scored;
    }
    sentence.clear();
  };
  for (std::size_t i = 0; i < stream.tokens.size(); ++i) {
    const Token& t = stream.tokens[i];
    if (i > 0 && t.sentence_index != stream.tokens[i - 1].sentence_index) flush();
    if (auto v = table.find(t.lemma)) sentence.push_back(*v);
  }
  flush();
  if (scored == 0) {
    throw Error(Errc::empty_input,
                stream.doc_id + ": no sentence has two in-vocabulary words for forward flow");
  }
  return total / static_cast<double>(scored);
}

// ---------------------------------------------------------------------------

namespace {

void require_distribution(std::span<const double> p, const char* name) {
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw Error(Errc::unnormalized, std::string(name) + " has a negative entry");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-6) {
    throw Error(Errc::unnormalized, std::string(name) + " sums to " + std::to_string(s));
  }
}

void require_chapters(std::span<const std::vector<double>> chapters) {
  if (chapters.size() < 2) {
    throw Error(Errc::chapterless, "harmony and variety need at least 2 chapters");
  }
}

}  // namespace

double hellinger(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(Errc::dimension_mismatch, "Hellinger distance of differently sized distributions");
  }
  require_distribution(p, "P");
  require_distribution(q, "Q");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    s += d * d;
  }
  return std::min(1.0, std::sqrt(s) / std::sqrt(2.0));
}

double harmony(std::span<const double> book, std::span<const std::vector<double>> chapters) {
  require_chapters(chapters);
  double s = 0.0;
  for (const auto& c : chapters) s += hellinger(book, c);
  return s / static_cast<double>(chapters.size());
}

double variety(std::span<const std::vector<double>> chapters) {
  require_chapters(chapters);
  double s = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < chapters.size(); ++i) {
    for (std::size_t j = i + 1; j < chapters.size(); ++j) {
      s += hellinger(chapters[i], chapters[j]);
      ++pairs;
    }
  }
  return s / static_cast<double>(pairs);
}

bool beauty_predicate(double harmony, double variety) { return variety > harmony; }

BeautyAssessment assess_beauty(std::string doc_id, std::span<const double> book,
                               std::span<const std::vector<double>> chapters) {
  BeautyAssessment out;
  out.doc_id = std::move(doc_id);
  out.harmony = harmony(book, chapters);
  out.variety = variety(chapters);
  out.beautiful = beauty_predicate(out.harmony, out.variety);
  return out;
}

std::vector<std::size_t> rank_beauty(std::span<const BeautyAssessment> books) {
  const std::size_t n = books.size();
  // Competition ranks: equal values share the smallest rank.
  auto ranks = [&](auto better) {
    std::vector<std::size_t> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t ahead = 0;
      for (std::size_t j = 0; j < n; ++j) ahead += better(books[j], books[i]) ? 1 : 0;
      r[i] = ahead + 1;
    }
    return r;
  };
  const auto harmony_rank = ranks([](const BeautyAssessment& a, const BeautyAssessment& b) {
    return a.harmony < b.harmony;
  });
  const auto variety_rank = ranks([](const BeautyAssessment& a, const BeautyAssessment& b) {
    return a.variety > b.variety;
  });
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& A = books[a];
    const auto& B = books[b];
    if (A.beautiful != B.beautiful) return A.beautiful;
    const std::size_t sa = harmony_rank[a] + variety_rank[a];
    const std::size_t sb = harmony_rank[b] + variety_rank[b];
    if (sa != sb) return sa < sb;
    if (A.variety != B.variety) return A.variety > B.variety;
    if (A.harmony != B.harmony) return A.harmony < B.harmony;
    return A.doc_id < B.doc_id;
  });
  return order;
}

}  // namespace litstyle
