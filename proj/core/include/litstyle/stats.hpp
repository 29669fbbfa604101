#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace litstyle {

double mean(std::span<const double> values);
// Population variance (divides by n).
double variance(std::span<const double> values);

struct FitResult {
  std::vector<double> coefficients;  // ascending degree, in the original x units
  double r2 = 0.0;
  double r2_adj = 0.0;
  double f_ratio = 0.0;
  double p_value = 1.0;
  int df_model = 0;
  int df_resid = 0;
  std::vector<double> residuals;

  double operator()(double x) const;
};

// Least squares via Householder QR on a centred and scaled design.
// Requires x.size() == y.size() > degree + 1 and a non-degenerate x.
FitResult polyfit(std::span<const double> x, std::span<const double> y, int degree);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Upper tail P(F > f) of the F(df1, df2) distribution.
double f_pvalue(double f, double df1, double df2);

// Two-sided P(|T| > |t|) for Student's t with `df` degrees of freedom.
double t_pvalue_two_sided(double t, double df);

double pearson(std::span<const double> x, std::span<const double> y);

struct AnovaResult {
  double f_ratio = 0.0;
  double p_value = 1.0;
  double r2 = 0.0;
  int df_between = 0;
  int df_within = 0;
};

AnovaResult anova_oneway(std::span<const std::vector<double>> groups);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Unequal-variance two-sample t test, used for pairwise group comparisons.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

struct Pca2d {
  std::vector<std::array<double, 2>> points;
  std::array<std::vector<double>, 2> components;
  std::array<double, 2> explained_variance{};
  double total_variance = 0.0;
  // Input spans fewer than two dimensions; the second component is zero.
  bool rank_deficient = false;
};

// Projection onto the two leading covariance eigenvectors found by power
// iteration with deflation. Each component is signed so that its largest
// magnitude loading is positive.
Pca2d pca_2d(std::span<const std::vector<double>> vectors, std::uint64_t seed = 1);

}  // namespace litstyle
