#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "synlik/error.hpp"
#include "synlik/numerics.hpp"

namespace synlik {
namespace {

using testing::test_stream;

// Independent oracles ------------------------------------------------------

Matrix naive_covariance(const Matrix& s, Vector& mean_out) {
  const auto n = s.rows();
  const auto d = s.cols();
  mean_out = Vector::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) mean_out(j) += s(i, j);
  }
  mean_out /= static_cast<double>(n);
  Matrix cov = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += (s(i, a) - mean_out(a)) * (s(i, b) - mean_out(b));
      cov(a, b) = acc / static_cast<double>(n - 1);
    }
  }
  return cov;
}

double explicit_inverse_logpdf(const Vector& x, const Vector& mu, const Matrix& sigma) {
  const Eigen::FullPivLU<Matrix> lu(2.0 * std::numbers::pi * sigma);
  const Vector r = x - mu;
  const Matrix inv = sigma.fullPivLu().inverse();
  return -0.5 * std::log(lu.determinant()) - 0.5 * r.dot(inv * r);
}

// moments -----------------------------------------------------------------

TEST(Moments, TwoPointVariance) {
  SummaryMatrix s(2, 1);
  s << 0.0, 2.0;
  const auto m = moments(s);
  EXPECT_DOUBLE_EQ(m.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(m.covariance(0, 0), 2.0);
  EXPECT_EQ(m.n, 2);
}

TEST(Moments, ConstantRowsGiveZeroCovariance) {
  SummaryMatrix s = SummaryMatrix::Constant(5, 3, 2.5);
  const auto m = moments(s);
  EXPECT_TRUE(m.mean.isApprox(Vector::Constant(3, 2.5)));
  EXPECT_EQ(m.covariance, Matrix::Zero(3, 3));
}

TEST(Moments, MatchesNaiveOracleAndIsExactlySymmetric) {
  auto rng = test_stream(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = 1 + static_cast<Eigen::Index>(rng.uniform() * 6);
    const auto n = 2 + static_cast<Eigen::Index>(rng.uniform() * 49);
    const Matrix s = testing::random_normal_matrix(rng, n, d) * 3.0;
    Vector mean;
    const Matrix oracle = naive_covariance(s, mean);
    const auto m = moments(s);
    ASSERT_LT((m.mean - mean).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_LT((m.covariance - oracle).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_EQ(m.covariance, m.covariance.transpose());
    ASSERT_TRUE((m.covariance.diagonal().array() >= 0.0).all());
  }
}

TEST(Moments, RandomFourByThreeMatchesOracle) {
  auto rng = test_stream(4);
  const Matrix s = testing::random_normal_matrix(rng, 4, 3);
  Vector mean;
  const Matrix oracle = naive_covariance(s, mean);
  EXPECT_LT((moments(s).covariance - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Moments, NeedsTwoRows) {
  EXPECT_THROW(moments(SummaryMatrix::Zero(1, 2)), InsufficientSimulations);
}

// mvn_logpdf --------------------------------------------------------------

TEST(MvnLogpdf, StandardNormalAtMode) {
  const Vector zero = Vector::Zero(1);
  EXPECT_NEAR(mvn_logpdf(zero, zero, Matrix::Identity(1, 1)), -0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(mvn_logpdf(zero, zero, Matrix::Identity(1, 1)), -0.918938533204672741, 1e-15);
}

TEST(MvnLogpdf, AtMeanWithDiagonalCovariance) {
  const Vector v = (Vector(3) << 0.5, 2.0, 3.0).finished();
  const Vector mu = (Vector(3) << 1.0, -1.0, 4.0).finished();
  const double expected = -1.5 * std::log(2.0 * std::numbers::pi) - 0.5 * v.array().log().sum();
  EXPECT_NEAR(mvn_logpdf(mu, mu, v.asDiagonal().toDenseMatrix()), expected, 1e-14);
}

TEST(MvnLogpdf, MatchesExplicitInverseOracle) {
  auto rng = test_stream(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix sigma = testing::random_spd(rng, 3);
    const Vector mu = testing::random_normal_matrix(rng, 3, 1);
    const Vector x = testing::random_normal_matrix(rng, 3, 1);
    ASSERT_NEAR(mvn_logpdf(x, mu, sigma), explicit_inverse_logpdf(x, mu, sigma), 1e-10);
  }
}

TEST(MvnLogpdf, TranslationInvariant) {
  auto rng = test_stream(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix sigma = testing::random_spd(rng, 4);
    const Vector mu = testing::random_normal_matrix(rng, 4, 1);
    const Vector x = testing::random_normal_matrix(rng, 4, 1);
    const Vector c = 10.0 * testing::random_normal_matrix(rng, 4, 1);
    ASSERT_NEAR(mvn_logpdf(x, mu, sigma), mvn_logpdf(x + c, mu + c, sigma), 1e-10);
  }
}

TEST(MvnLogpdf, NonPositiveDefiniteIsMinusInfinity) {
  Matrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  EXPECT_EQ(mvn_logpdf(Vector::Zero(2), Vector::Zero(2), singular), -INFINITY);
  Matrix indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  EXPECT_EQ(mvn_logpdf(Vector::Zero(2), Vector::Zero(2), indefinite), -INFINITY);
}

TEST(MvnLogpdf, DimensionMismatchThrows) {
  EXPECT_THROW(mvn_logpdf(Vector::Zero(2), Vector::Zero(3), Matrix::Identity(2, 2)), DomainError);
}

// normal cdf / quantile ---------------------------------------------------

TEST(NormalQuantile, Symmetry) {
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
  // Dyadic u so that 1 - u is exact.
  for (double u : {0x1p-30, 0x1p-17, 0x1p-7, 0.125, 0.25, 0.375, 0.4375}) {
    EXPECT_NEAR(std_normal_quantile(u), -std_normal_quantile(1.0 - u), 1e-12) << u;
  }
}

TEST(NormalQuantile, UpperTwoPointFivePercent) {
  const double z = std_normal_quantile(0.975);
  EXPECT_NEAR(z, 1.959963984540054, 1e-12);
  EXPECT_NEAR(std_normal_cdf(z), 0.975, 1e-12);
}

TEST(NormalQuantile, CdfRoundTripOnLogGrid) {
  for (int k = -300; k <= 0; ++k) {
    const double u = std::pow(10.0, k / 20.0) * 0.5;
    ASSERT_NEAR(std_normal_cdf(std_normal_quantile(u)), u, 1e-12 * std::max(1.0, u)) << u;
    // Relative accuracy in the far tail.
    ASSERT_NEAR(std_normal_cdf(std_normal_quantile(u)) / u, 1.0, 1e-12) << u;
    const double upper = 1.0 - u;
    ASSERT_NEAR(std_normal_cdf(std_normal_quantile(upper)), upper, 1e-12) << upper;
  }
}

TEST(NormalQuantile, OutsideUnitIntervalThrows) {
  EXPECT_THROW(std_normal_quantile(0.0), DomainError);
  EXPECT_THROW(std_normal_quantile(1.0), DomainError);
  EXPECT_THROW(std_normal_quantile(-0.5), DomainError);
}

TEST(NormalPdf, Values) {
  EXPECT_NEAR(std_normal_pdf(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
  EXPECT_NEAR(std_normal_pdf(1.0), 0.24197072451914337, 1e-16);
  EXPECT_NEAR(std_normal_cdf(0.0), 0.5, 1e-16);
}

// ranks -------------------------------------------------------------------

TEST(Ranks, HandExample) {
  const std::vector<double> x = {3.1, 1.0, 2.5};
  EXPECT_EQ(ranks(x), (std::vector<int>{3, 1, 2}));
}

TEST(Ranks, TiesBrokenByFirstOccurrence) {
  const std::vector<double> x = {5.0, 5.0, 5.0};
  EXPECT_EQ(ranks(x), (std::vector<int>{1, 2, 3}));
  const std::vector<double> y = {2.0, 1.0, 2.0, 1.0};
  EXPECT_EQ(ranks(y), (std::vector<int>{3, 1, 4, 2}));
}

TEST(Ranks, MatchesSortOracleAndIsPermutation) {
  auto rng = test_stream(12);
  std::vector<double> x(100);
  for (double& v : x) v = rng.normal();
  const auto r = ranks(x);
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto pos = std::lower_bound(sorted.begin(), sorted.end(), x[i]) - sorted.begin();
    ASSERT_EQ(r[i], pos + 1);
  }
  std::vector<int> expected(100);
  std::iota(expected.begin(), expected.end(), 1);
  auto r_sorted = r;
  std::sort(r_sorted.begin(), r_sorted.end());
  EXPECT_EQ(r_sorted, expected);
}

// quantiles and summaries -------------------------------------------------

TEST(SortedQuantile, TypeSevenInterpolation) {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(sorted_quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(sorted_quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(sorted_quantile(x, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(sorted_quantile(x, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(sorted_quantile(x, 0.75), 3.25);
}

TEST(SixNumberSummary, MatchesHandValues) {
  const std::vector<double> x = {7.0, 1.0, 3.0, 5.0, 9.0};
  const auto s = six_number_summary(x);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.first_quartile, 3.0);
  EXPECT_DOUBLE_EQ(s.median, 5.0);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.third_quartile, 7.0);
  EXPECT_DOUBLE_EQ(s.max, 9.0);
}

// effective sample size ---------------------------------------------------

TEST(Ess, IidChainNearLength) {
  auto rng = test_stream(13);
  std::vector<double> chain(10000);
  for (double& v : chain) v = rng.normal();
  const auto ess = effective_sample_size(chain);
  EXPECT_FALSE(ess.degenerate);
  EXPECT_GE(ess.value, 8500.0);
  EXPECT_LE(ess.value, 11000.0);
}

TEST(Ess, ConstantChainIsZero) {
  const std::vector<double> chain(500, 1.25);
  const auto ess = effective_sample_size(chain);
  EXPECT_TRUE(ess.degenerate);
  EXPECT_EQ(ess.value, 0.0);
}

TEST(Ess, Ar1MatchesAnalyticValue) {
  auto rng = test_stream(14);
  const double phi = 0.9;
  const std::size_t m = 50000;
  std::vector<double> chain(m);
  double x = rng.normal() / std::sqrt(1.0 - phi * phi);
  for (auto& v : chain) {
    x = phi * x + rng.normal();
    v = x;
  }
  const double analytic = static_cast<double>(m) * (1.0 - phi) / (1.0 + phi);
  const auto ess = effective_sample_size(chain);
  EXPECT_NEAR(ess.value, analytic, 0.2 * analytic);
}

TEST(Ess, NeverExceedsChainLength) {
  // Strongly alternating chain: negative lag-1 autocorrelation would push
  // M / tau above M without the clamp.
  std::vector<double> chain(1000);
  for (std::size_t i = 0; i < chain.size(); ++i) chain[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const auto ess = effective_sample_size(chain);
  EXPECT_LE(ess.value, 1000.0);
  EXPECT_GE(ess.value, 0.0);
}

}  // namespace
}  // namespace synlik
