#pragma once

// Brute-force reference implementations for the measures. Each one takes a
// different algebraic route from the library code and accumulates in long
// double, so agreement is evidence rather than a copy of the same mistake.

#include <cmath>
#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

// H = log2 N - (1/N) sum c log2 c
inline double entropy(const std::vector<std::string>& lemmas) {
  std::map<std::string, long double> counts;
  for (const auto& l : lemmas) counts[l] += 1.0L;
  const long double n = static_cast<long double>(lemmas.size());
  long double s = 0.0L;
  for (const auto& [w, c] : counts) s += c * std::log2(c);
  return static_cast<double>(std::log2(n) - s / n);
}

inline long double sq_dist(const Vec& a, const Vec& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

// Mean squared distance to the centroid equals half the mean squared
// distance over all ordered pairs.
inline double itv(const std::vector<Vec>& chunks) {
  const long double n = static_cast<long double>(chunks.size());
  long double s = 0.0L;
  for (const auto& a : chunks) {
    for (const auto& b : chunks) s += sq_dist(a, b);
  }
  return static_cast<double>(s / (2.0L * n * n));
}

inline double swd(const std::vector<Vec>& chunks) {
  long double s = 0.0L;
  for (std::size_t i = 1; i < chunks.size(); ++i) s += sq_dist(chunks[i - 1], chunks[i]);
  return static_cast<double>(s / static_cast<long double>(chunks.size() - 1));
}

inline long double cos_dist(const Vec& a, const Vec& b) {
  long double ab = 0.0L, aa = 0.0L, bb = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  return 1.0L - ab / std::sqrt(aa * bb);
}

// Average over words 2..n of the mean distance to every earlier word.
inline double forward_flow(const std::vector<Vec>& words) {
  long double total = 0.0L;
  for (std::size_t i = 1; i < words.size(); ++i) {
    long double inner = 0.0L;
    for (std::size_t j = 0; j < i; ++j) inner += cos_dist(words[i], words[j]);
    total += inner / static_cast<long double>(i);
  }
  return static_cast<double>(total / static_cast<long double>(words.size() - 1));
}

// Hellinger through the Bhattacharyya coefficient: sqrt(1 - sum sqrt(p q)).
inline double hellinger(const Vec& p, const Vec& q) {
  long double bc = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(static_cast<long double>(p[i]) * q[i]);
  const long double v = 1.0L - bc;
  return static_cast<double>(v <= 0.0L ? 0.0L : std::sqrt(v));
}

inline double harmony(const Vec& book, const std::vector<Vec>& chapters) {
  long double s = 0.0L;
  for (const auto& c : chapters) s += hellinger(book, c);
  return static_cast<double>(s / static_cast<long double>(chapters.size()));
}

// Mean over ordered pairs i != j, which equals the mean over unordered pairs.
inline double variety(const std::vector<Vec>& chapters) {
  long double s = 0.0L;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < chapters.size(); ++i) {
    for (std::size_t j = 0; j < chapters.size(); ++j) {
      if (i == j) continue;
      s += hellinger(chapters[i], chapters[j]);
      ++pairs;
    }
  }
  return static_cast<double>(s / static_cast<long double>(pairs));
}

struct TopicMatch {
  std::vector<std::size_t> fitted_of_true;  // fitted topic matched to each true topic
  double purity = 0.0;                      // mean share of matched top words
};

// Greedy max-overlap matching between fitted top-word lists and the true
// topic vocabularies; each step takes the largest remaining overlap.
inline TopicMatch match_topics(const std::vector<std::vector<std::string>>& fitted_top,
                               const std::vector<std::vector<std::string>>& true_words) {
  const std::size_t kf = fitted_top.size(), kt = true_words.size();
  std::vector<std::vector<std::size_t>> overlap(kf, std::vector<std::size_t>(kt, 0));
  for (std::size_t f = 0; f < kf; ++f) {
    for (std::size_t t = 0; t < kt; ++t) {
      const std::set<std::string> truth(true_words[t].begin(), true_words[t].end());
      for (const auto& w : fitted_top[f]) overlap[f][t] += truth.count(w);
    }
  }
  TopicMatch out;
  out.fitted_of_true.assign(kt, kf);
  std::vector<bool> used_f(kf, false), used_t(kt, false);
  long double total = 0.0L;
  std::size_t denom = 0;
  for (std::size_t step = 0; step < std::min(kf, kt); ++step) {
    std::size_t bf = 0, bt = 0, best = 0;
    bool found = false;
    for (std::size_t f = 0; f < kf; ++f) {
      for (std::size_t t = 0; t < kt; ++t) {
        if (used_f[f] || used_t[t]) continue;
        if (!found || overlap[f][t] > best) {
          bf = f, bt = t, best = overlap[f][t], found = true;
        }
      }
    }
    used_f[bf] = used_t[bt] = true;
    out.fitted_of_true[bt] = bf;
    total += static_cast<long double>(best);
    denom += fitted_top[bf].size();
  }
  out.purity = denom == 0 ? 0.0 : static_cast<double>(total / static_cast<long double>(denom));
  return out;
}

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace oracle
