#include "litstyle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "litstyle/error.hpp"
#include "litstyle/random.hpp"

namespace litstyle {

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::empty_input, "mean of no values");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
  const double m = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size());
}

double FitResult::operator()(double x) const {
  double y = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;) y = y * x + coefficients[k];
  return y;
}

namespace {

// Solves min ||A c - b|| for a column-major m x n design by Householder QR.
std::vector<double> least_squares(std::vector<std::vector<double>> cols,
                                  std::vector<double> b) {
  const std::size_t n = cols.size();
  const std::size_t m = b.size();
  double max_diag = 0.0;
  std::vector<double> diag(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) norm2 += cols[k][i] * cols[k][i];
    const double norm = std::sqrt(norm2);
    const double alpha = cols[k][k] > 0 ? -norm : norm;
    std::vector<double> v(cols[k].begin() + static_cast<std::ptrdiff_t>(k), cols[k].end());
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 > 0.0) {
      auto reflect = [&](std::vector<double>& col) {
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += v[i - k] * col[i];
        const double f = 2.0 * s / vnorm2;
        for (std::size_t i = k; i < m; ++i) col[i] -= f * v[i - k];
      };
      for (std::size_t j = k; j < n; ++j) reflect(cols[j]);
      reflect(b);
    }
    diag[k] = cols[k][k];
    max_diag = std::max(max_diag, std::abs(diag[k]));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(std::abs(diag[k]) > 1e-12 * max_diag)) {
      throw Error(Errc::singular, "least-squares design matrix is rank deficient");
    }
  }
  std::vector<double> c(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= cols[j][k] * c[j];
    c[k] = s / cols[k][k];
  }
  return c;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 1000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

FitResult polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (degree < 0) throw Error(Errc::invalid_argument, "negative polynomial degree");
  if (x.size() != y.size()) {
    throw Error(Errc::invalid_argument, "polyfit: x and y differ in length");
  }
  const std::size_t n = x.size();
  const std::size_t p = static_cast<std::size_t>(degree);
  if (n <= p + 1) {
    throw Error(Errc::invalid_argument, "polyfit: need more than degree + 1 points");
  }
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double center = (*hi + *lo) / 2.0;
  const double scale = (*hi - *lo) / 2.0;
  if (!(scale > 0.0)) throw Error(Errc::singular, "polyfit: all x values are equal");

  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = (x[i] - center) / scale;
  std::vector<std::vector<double>> cols(p + 1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double power = 1.0;
    for (std::size_t k = 0; k <= p; ++k) {
      cols[k][i] = power;
      power *= t[i];
    }
  }
  const std::vector<double> scaled = least_squares(cols, std::vector<double>(y.begin(), y.end()));

  FitResult fit;
  fit.coefficients.assign(p + 1, 0.0);
  for (std::size_t k = 0; k <= p; ++k) {
    const double ak = scaled[k] / std::pow(scale, static_cast<double>(k));
    for (std::size_t j = 0; j <= k; ++j) {
      fit.coefficients[j] += ak * binomial(static_cast<int>(k), static_cast<int>(j)) *
                             std::pow(-center, static_cast<double>(k - j));
    }
  }

  const double y_mean = mean(y);
  double sse = 0.0;
  double sst = 0.0;
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double yhat = 0.0;
    for (std::size_t k = p + 1; k-- > 0;) yhat = yhat * t[i] + scaled[k];
    fit.residuals[i] = y[i] - yhat;
    sse += fit.residuals[i] * fit.residuals[i];
    sst += (y[i] - y_mean) * (y[i] - y_mean);
  }
  fit.df_model = degree;
  fit.df_resid = static_cast<int>(n - p - 1);
  // Relative to the data scale, anything below this is round-off.
  const double sst_floor = 1e-24 * std::max(1.0, y_mean * y_mean) * static_cast<double>(n);
  if (sst <= sst_floor) {
    fit.r2 = 0.0;
    fit.r2_adj = 0.0;
    fit.f_ratio = 0.0;
    fit.p_value = 1.0;
    return fit;
  }
  fit.r2 = std::clamp(1.0 - sse / sst, 0.0, 1.0);
  fit.r2_adj = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) /
                         static_cast<double>(n - p - 1);
  if (degree == 0) {
    fit.f_ratio = 0.0;
    fit.p_value = 1.0;
  } else if (sse <= 1e-30 * sst) {
    fit.f_ratio = std::numeric_limits<double>::infinity();
    fit.p_value = 0.0;
  } else {
    fit.f_ratio = ((sst - sse) / fit.df_model) / (sse / fit.df_resid);
    fit.p_value = f_pvalue(fit.f_ratio, fit.df_model, fit.df_resid);
  }
  return fit;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(Errc::invalid_argument, "incomplete beta needs a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_pvalue(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) {
    throw Error(Errc::invalid_argument, "F test needs positive degrees of freedom");
  }
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return std::clamp(incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f)), 0.0, 1.0);
}

double t_pvalue_two_sided(double t, double df) {
  if (!(df > 0.0)) throw Error(Errc::invalid_argument, "t test needs df > 0");
  if (std::isinf(t)) return 0.0;
  return std::clamp(incomplete_beta(df / 2.0, 0.5, df / (df + t * t)), 0.0, 1.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::invalid_argument, "pearson: length mismatch");
  if (x.size() < 3) throw Error(Errc::invalid_argument, "pearson: need at least 3 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(Errc::invalid_argument, "pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

AnovaResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error(Errc::invalid_argument, "ANOVA needs at least 2 groups");
  std::size_t total = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error(Errc::invalid_argument, "ANOVA groups need at least 2 values");
    total += g.size();
    for (double v : g) grand += v;
  }
  grand /= static_cast<double>(total);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  if (!(ssw > 0.0)) throw Error(Errc::invalid_argument, "ANOVA: no within-group variance");
  AnovaResult out;
  out.df_between = static_cast<int>(groups.size()) - 1;
  out.df_within = static_cast<int>(total - groups.size());
  out.f_ratio = (ssb / out.df_between) / (ssw / out.df_within);
  out.p_value = f_pvalue(out.f_ratio, out.df_between, out.df_within);
  out.r2 = ssb / (ssb + ssw);
  return out;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(Errc::invalid_argument, "Welch test needs at least 2 values per group");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = variance(a) * na / (na - 1.0);
  const double vb = variance(b) * nb / (nb - 1.0);
  const double se2 = va / na + vb / nb;
  if (!(se2 > 0.0)) throw Error(Errc::invalid_argument, "Welch test: zero variance");
  WelchResult out;
  out.t = (mean(a) - mean(b)) / std::sqrt(se2);
  out.df = se2 * se2 /
           ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  out.p_value = t_pvalue_two_sided(out.t, out.df);
  return out;
}

Pca2d pca_2d(std::span<const std::vector<double>> vectors, std::uint64_t seed) {
  if (vectors.size() < 3) throw Error(Errc::invalid_argument, "PCA needs at least 3 vectors");
  const std::size_t d = vectors.front().size();
  if (d < 2) throw Error(Errc::invalid_argument, "PCA needs dimension >= 2");
  const std::size_t n = vectors.size();
  std::vector<double> mu(d, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != d) throw Error(Errc::dimension_mismatch, "PCA: vector dimensions differ");
    for (std::size_t j = 0; j < d; ++j) mu[j] += v[j];
  }
  for (double& m : mu) m /= static_cast<double>(n);

  std::vector<double> cov(d * d, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = v[i] - mu[i];
      for (std::size_t j = i; j < d; ++j) cov[i * d + j] += di * (v[j] - mu[j]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= static_cast<double>(n);
      cov[j * d + i] = cov[i * d + j];
    }
  }

  Pca2d out;
  for (std::size_t i = 0; i < d; ++i) out.total_variance += cov[i * d + i];

  Rng rng(seed);
  const double scale_floor = 1e-12 * std::max(out.total_variance, 1e-300);
  for (int c = 0; c < 2; ++c) {
    std::vector<double> v(d);
    for (double& x : v) x = rng.normal();
    std::vector<double> w(d);
    double lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += cov[i * d + j] * v[j];
        w[i] = s;
      }
      double wn = 0.0;
      for (double x : w) wn += x * x;
      wn = std::sqrt(wn);
      if (!(wn > 0.0)) {
        lambda = 0.0;
        break;
      }
      double delta = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        w[i] /= wn;
        delta += (w[i] - v[i]) * (w[i] - v[i]);
      }
      v.swap(w);
      lambda = wn;
      if (std::sqrt(delta) < 1e-10) break;
    }
    if (!(lambda > scale_floor)) {
      out.rank_deficient = true;
      out.components[c].assign(d, 0.0);
      out.explained_variance[c] = 0.0;
      continue;
    }
    std::size_t arg = 0;
    for (std::size_t i = 1; i < d; ++i) {
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    }
    if (v[arg] < 0) {
      for (double& x : v) x = -x;
    }
    // Rayleigh quotient for the eigenvalue.
    double rq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += cov[i * d + j] * v[j];
      rq += v[i] * s;
    }
    out.components[c] = v;
    out.explained_variance[c] = rq;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) cov[i * d + j] -= rq * v[i] * v[j];
    }
  }

  out.points.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int c = 0; c < 2; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (vectors[k][j] - mu[j]) * out.components[c][j];
      out.points[k][c] = s;
    }
  }
  return out;
}

}  // namespace litstyle
