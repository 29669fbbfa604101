#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "litstyle/error.hpp"
#include "litstyle/random.hpp"
#include "litstyle/stats.hpp"

using namespace litstyle;

namespace {

// Least squares through a complete orthogonal decomposition, independent of
// the library's normal-equation route.
std::vector<double> lstsq_oracle(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  Eigen::MatrixXd a(x.size(), degree + 1);
  Eigen::VectorXd b(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int d = 0; d <= degree; ++d) a(i, d) = std::pow(x[i], d);
    b(i) = y[i];
  }
  const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(b);
  return {c.data(), c.data() + c.size()};
}

}  // namespace

TEST(Polyfit, ExactCubicRecovered) {
  std::vector<double> x, y;
  for (int i = -3; i <= 6; ++i) {
    x.push_back(i);
    y.push_back(1 + 2.0 * i - std::pow(i, 3));
  }
  const auto f = polyfit(x, y, 3);
  const std::vector<double> want{1, 2, 0, -1};
  for (int d = 0; d <= 3; ++d) EXPECT_NEAR(f.coefficients[d], want[d], 1e-8);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(Polyfit, ConstantHasZeroR2) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6}, y(6, 2.5);
  const auto f = polyfit(x, y, 2);
  EXPECT_EQ(f.r2, 0.0);
  EXPECT_NEAR(f.coefficients[0], 2.5, 1e-12);
}

TEST(Polyfit, MatchesPseudoInverse) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> y{3.1, 2.4, 2.9, 2.2, 1.7, 1.9, 1.1, 0.4, 0.9, 0.2};
  const auto f = polyfit(x, y, 3);
  const auto want = lstsq_oracle(x, y, 3);
  for (int d = 0; d <= 3; ++d) EXPECT_NEAR(f.coefficients[d], want[d], 1e-8);
  const double p = 3.0, n = 10.0;
  EXPECT_NEAR(f.r2_adj, 1.0 - (1.0 - f.r2) * (n - 1.0) / (n - p - 1.0), 1e-12);
  EXPECT_EQ(f.df_model, 3);
  EXPECT_EQ(f.df_resid, 6);
}

TEST(Polyfit, ResidualsOrthogonalToDesign) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 25; ++i) {
      x.push_back(rng.uniform(-5, 5));
      y.push_back(rng.normal() + 0.2 * x.back());
    }
    const auto f = polyfit(x, y, 3);
    for (int d = 0; d <= 3; ++d) {
      double dot = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        dot += f.residuals[i] * std::pow(x[i], d);
        scale += std::abs(std::pow(x[i], d));
      }
      EXPECT_NEAR(dot / scale, 0.0, 1e-8);
    }
    EXPECT_GE(f.r2, 0.0);
    EXPECT_LE(f.r2, 1.0);
    EXPECT_GE(f.p_value, 0.0);
    EXPECT_LE(f.p_value, 1.0);
  }
}

TEST(Polyfit, Errors) {
  EXPECT_THROW(polyfit(std::vector<double>{1, 1, 1, 1, 1}, std::vector<double>{1, 2, 3, 4, 5}, 2), Error);
  EXPECT_THROW(polyfit(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}, 2), Error);
  EXPECT_THROW(polyfit(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3}, 1), Error);
}

TEST(FPValue, Examples) {
  EXPECT_EQ(f_pvalue(0.0, 3, 6), 1.0);
  EXPECT_NEAR(f_pvalue(1.0, 1, 1), 0.5, 1e-10);
  EXPECT_NEAR(f_pvalue(4.76, 3, 6), 0.05, 0.002);
}

TEST(FPValue, ClosedFormForTwoNumeratorDf) {
  // With df1 = 2 the upper tail is (1 + 2f/df2)^(-df2/2).
  for (double df2 : {1.0, 3.0, 6.0, 20.0, 75.0}) {
    for (double f : {0.1, 0.5, 1.0, 3.0, 10.0, 48.0}) {
      EXPECT_NEAR(f_pvalue(f, 2, df2), std::pow(1.0 + 2.0 * f / df2, -df2 / 2.0), 1e-9) << f << " " << df2;
    }
  }
}

TEST(FPValue, MonotoneDecreasing) {
  double last = 1.0;
  for (double f = 0.0; f < 30.0; f += 0.25) {
    const double p = f_pvalue(f, 3, 6);
    EXPECT_LE(p, last + 1e-15);
    last = p;
  }
}

TEST(TPValue, KnownQuantiles) {
  EXPECT_NEAR(t_pvalue_two_sided(2.228, 10), 0.05, 5e-4);
  EXPECT_NEAR(t_pvalue_two_sided(0.0, 7), 1.0, 1e-12);
  EXPECT_NEAR(t_pvalue_two_sided(1.0, 1), 0.5, 1e-10);
}

TEST(Pearson, Examples) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> lin, neg;
  for (double v : x) {
    lin.push_back(2 * v + 1);
    neg.push_back(-v);
  }
  EXPECT_NEAR(pearson(x, lin), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(pearson(x, std::vector<double>{2, 4, 5, 4, 5}), 0.7745966692414834, 1e-12);
  EXPECT_THROW(pearson(x, std::vector<double>(5, 1.0)), Error);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
}

TEST(Pearson, AffineInvariant) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(20), y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      x[i] = rng.normal();
      y[i] = x[i] + rng.normal();
    }
    auto y2 = y;
    const double a = rng.uniform(0.1, 10), b = rng.uniform(-5, 5);
    for (auto& v : y2) v = a * v + b;
    EXPECT_NEAR(pearson(x, y), pearson(x, y2), 1e-12);
  }
}

TEST(Anova, ThreeGroupTextbook) {
  const std::vector<std::vector<double>> g{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  const auto a = anova_oneway(g);
  EXPECT_NEAR(a.f_ratio, 27.0, 1e-12);
  EXPECT_NEAR(a.p_value, 0.001, 1e-9);
  EXPECT_EQ(a.df_between, 2);
  EXPECT_EQ(a.df_within, 6);
  EXPECT_NEAR(a.r2, 0.9, 1e-12);
}

TEST(Anova, EqualMeansAndSeparatedGroups) {
  const auto same = anova_oneway(std::vector<std::vector<double>>{{1, 3, 5}, {2, 3, 4}, {0, 3, 6}});
  EXPECT_NEAR(same.f_ratio, 0.0, 1e-12);
  EXPECT_NEAR(same.p_value, 1.0, 1e-12);
  Rng rng(3);
  std::vector<std::vector<double>> apart(2);
  for (int i = 0; i < 20; ++i) {
    apart[0].push_back(rng.normal());
    apart[1].push_back(10.0 + rng.normal());
  }
  EXPECT_LT(anova_oneway(apart).p_value, 0.001);
}

TEST(Anova, Degenerate) {
  EXPECT_THROW(anova_oneway(std::vector<std::vector<double>>{{1, 2, 3}}), Error);
  EXPECT_THROW(anova_oneway(std::vector<std::vector<double>>{{1, 2}, {3}}), Error);
  EXPECT_THROW(anova_oneway(std::vector<std::vector<double>>{{1, 1}, {2, 2}}), Error);
}

TEST(Welch, HandExample) {
  const std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8, 10};
  // means 2.5, 6; variances 5/3, 10; se^2 = 5/12 + 2
  const double se2 = 5.0 / 12.0 + 2.0;
  const auto w = welch_t(a, b);
  EXPECT_NEAR(w.t, -3.5 / std::sqrt(se2), 1e-12);
  const double df = se2 * se2 / ((5.0 / 12.0) * (5.0 / 12.0) / 3.0 + 4.0 / 4.0);
  EXPECT_NEAR(w.df, df, 1e-12);
  EXPECT_NEAR(w.p_value, t_pvalue_two_sided(w.t, w.df), 1e-15);
}

TEST(Pca, PlanarPointsKeepDistances) {
  Rng rng(10);
  // Orthonormal basis of a plane in 5-d.
  std::vector<double> u{1, 1, 0, 0, 1}, v{1, -1, 2, 0, 0};
  const auto nrm = [](std::vector<double>& w) {
    double s = 0;
    for (double x : w) s += x * x;
    for (double& x : w) x /= std::sqrt(s);
  };
  nrm(u);
  double uv = 0;
  for (int i = 0; i < 5; ++i) uv += u[i] * v[i];
  for (int i = 0; i < 5; ++i) v[i] -= uv * u[i];
  nrm(v);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 30; ++i) {
    const double a = 3.0 * rng.normal(), b = rng.normal();
    std::vector<double> p(5);
    for (int d = 0; d < 5; ++d) p[d] = 7.0 + a * u[d] + b * v[d];
    pts.push_back(p);
  }
  const auto pca = pca_2d(pts);
  EXPECT_FALSE(pca.rank_deficient);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d_in = 0;
      for (int d = 0; d < 5; ++d) d_in += (pts[i][d] - pts[j][d]) * (pts[i][d] - pts[j][d]);
      const double dx = pca.points[i][0] - pca.points[j][0], dy = pca.points[i][1] - pca.points[j][1];
      EXPECT_NEAR(std::sqrt(d_in), std::sqrt(dx * dx + dy * dy), 1e-6);
    }
  }
}

TEST(Pca, IsotropicCloudSplitsVariance) {
  Rng rng(14);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 4000; ++i) pts.push_back({rng.normal(), rng.normal()});
  const auto pca = pca_2d(pts);
  EXPECT_NEAR(pca.explained_variance[0] / pca.explained_variance[1], 1.0, 0.15);
}

TEST(Pca, DuplicatedPointIsRankDeficient) {
  const std::vector<std::vector<double>> pts(5, std::vector<double>{1, 2, 3});
  const auto pca = pca_2d(pts);
  EXPECT_TRUE(pca.rank_deficient);
  for (const auto& p : pca.points) EXPECT_EQ(p[1], 0.0);
}

TEST(Pca, DeterministicAndVarianceBounded) {
  const auto cloud = [] {
    Rng rng(15);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 50; ++i) {
      std::vector<double> p(6);
      for (auto& x : p) x = rng.normal();
      p[0] *= 4;
      pts.push_back(p);
    }
    return pts;
  }();
  const auto a = pca_2d(cloud, 3), b = pca_2d(cloud, 3);
  EXPECT_EQ(a.points, b.points);
  EXPECT_LE(a.explained_variance[0] + a.explained_variance[1], a.total_variance + 1e-9);
  // Sign convention: largest-magnitude loading positive.
  for (const auto& c : a.components) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (std::abs(c[i]) > std::abs(c[arg])) arg = i;
    }
    EXPECT_GT(c[arg], 0.0);
  }
  EXPECT_THROW(pca_2d(std::vector<std::vector<double>>{{1, 2}, {3, 4}}), Error);
}
