#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "synlik/error.hpp"
#include "synlik/estimators.hpp"
#include "synlik/numerics.hpp"
#include "synlik/shrinkage.hpp"

namespace synlik {
namespace {

using testing::test_stream;

Matrix two_by_two(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return m;
}

int zero_count(const Matrix& precision) {
  int zeros = 0;
  for (Eigen::Index i = 0; i < precision.rows(); ++i)
    for (Eigen::Index j = 0; j < precision.cols(); ++j)
      if (i != j && precision(i, j) == 0.0) ++zeros;
  return zeros;
}

GlassoOptions tight() {
  GlassoOptions options;
  options.tol = 1e-10;
  options.inner_tol = 1e-14;
  return options;
}

// glasso ------------------------------------------------------------------

TEST(Glasso, DiagonalInputIsUnchanged) {
  const Matrix s = Vector((Vector(3) << 1.0, 2.5, 0.3).finished()).asDiagonal();
  for (double lambda : {0.0, 0.1, 5.0}) {
    const auto r = glasso(s, lambda);
    EXPECT_EQ(r.covariance, s);
    EXPECT_LT((r.precision - Matrix(s.inverse())).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Glasso, TwoByTwoSoftThreshold) {
  const auto r = glasso(two_by_two(1.0, 0.5, 1.0), 0.2);
  EXPECT_NEAR(r.covariance(0, 1), 0.3, 1e-5);
  EXPECT_NEAR(r.covariance(1, 0), 0.3, 1e-5);
  EXPECT_EQ(r.covariance(0, 0), 1.0);
  const auto neg = glasso(two_by_two(2.0, -0.9, 1.0), 0.4);
  EXPECT_NEAR(neg.covariance(0, 1), -0.5, 1e-5);
}

TEST(Glasso, LargePenaltyGivesDiagonalPrecision) {
  const auto r = glasso(two_by_two(1.0, 0.5, 1.0), 0.6);
  EXPECT_EQ(r.precision(0, 1), 0.0);
  EXPECT_NEAR(r.covariance(0, 1), 0.0, 1e-12);
}

TEST(Glasso, ZeroPenaltyRecoversInput) {
  auto rng = test_stream(50);
  for (int d : {2, 3, 5, 8}) {
    const Matrix s = testing::random_spd(rng, d);
    const auto r = glasso(s, 0.0, tight());
    EXPECT_LT((r.covariance - s).norm() / s.norm(), 1e-6) << d;
  }
}

TEST(Glasso, DiagonalIsNeverPenalised) {
  auto rng = test_stream(51);
  const Matrix s = testing::random_spd(rng, 6);
  for (double lambda : {0.01, 0.1, 1.0}) {
    EXPECT_EQ(glasso(s, lambda).covariance.diagonal(), s.diagonal());
  }
}

// Stationarity of log|P| - tr(P S) - lambda sum_{i != j} |P_ij|:
// W_ij = S_ij + lambda sign(P_ij) where P_ij != 0, |W_ij - S_ij| <= lambda otherwise.
TEST(Glasso, SatisfiesOptimalityConditions) {
  auto rng = test_stream(52);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix s = testing::random_spd(rng, 6, 0.2);
    const double lambda = 0.05 + 0.1 * trial;
    const auto r = glasso(s, lambda, tight());
    ASSERT_TRUE(r.converged);
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (Eigen::Index j = 0; j < 6; ++j) {
        if (i == j) continue;
        const double gap = r.covariance(i, j) - s(i, j);
        if (r.precision(i, j) == 0.0) {
          ASSERT_LE(std::abs(gap), lambda + 1e-7);
        } else {
          ASSERT_NEAR(gap, lambda * (r.precision(i, j) > 0 ? 1.0 : -1.0), 1e-7);
        }
      }
    }
  }
}

TEST(Glasso, CovarianceTimesPrecisionIsIdentity) {
  auto rng = test_stream(53);
  const Matrix s = testing::random_spd(rng, 5);
  const auto r = glasso(s, 0.15, tight());
  EXPECT_LT((r.covariance * r.precision - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_TRUE(cholesky_lower(r.covariance).has_value());
}

TEST(Glasso, ZeroCountGrowsWithPenalty) {
  auto rng = test_stream(54);
  const Matrix s = testing::random_spd(rng, 5, 0.3);
  int previous = -1;
  for (double lambda = 0.0; lambda <= 2.0; lambda += 0.05) {
    const int zeros = zero_count(glasso(s, lambda, tight()).precision);
    EXPECT_GE(zeros, previous) << lambda;
    previous = zeros;
  }
  EXPECT_EQ(previous, 20);
}

TEST(Glasso, RejectsBadInput) {
  EXPECT_THROW(glasso(two_by_two(1.0, 0.5, 1.0), -0.1), DomainError);
  EXPECT_THROW(glasso(two_by_two(1.0, 0.5, 0.0), 0.1), DegenerateMargin);
}

TEST(GlassoCorrelation, KeepsUnitDiagonal) {
  const Matrix r = glasso_correlation(two_by_two(1.0, 0.5, 1.0), 0.2);
  EXPECT_EQ(r.diagonal(), Vector::Ones(2));
  EXPECT_NEAR(r(0, 1), 0.3, 1e-5);
  auto rng = test_stream(55);
  const Matrix c = gaussian_rank_correlation(testing::random_normal_matrix(rng, 30, 4));
  const Matrix shrunk = glasso_correlation(c, 0.1);
  EXPECT_EQ(shrunk.diagonal(), Vector::Ones(4));
  EXPECT_LE(shrunk.cwiseAbs().maxCoeff(), 1.0);
}

// Warton ------------------------------------------------------------------

TEST(Warton, Endpoints) {
  auto rng = test_stream(56);
  const Matrix s = testing::random_spd(rng, 4);
  EXPECT_EQ(warton_covariance(s, 1.0), s);
  EXPECT_EQ(warton_covariance(s, 0.0), Matrix(s.diagonal().asDiagonal()));
}

TEST(Warton, HandExample) {
  const Matrix w = warton_covariance(two_by_two(4.0, 1.6, 1.0), 0.5);
  EXPECT_NEAR(w(0, 1), 0.8, 1e-15);
  EXPECT_EQ(w(0, 0), 4.0);
  EXPECT_EQ(w(1, 1), 1.0);
}

TEST(Warton, MatchesCorrelationForm) {
  auto rng = test_stream(57);
  const Matrix s = testing::random_spd(rng, 4);
  const Vector sd = s.diagonal().cwiseSqrt();
  const Matrix corr = sd.cwiseInverse().asDiagonal() * s * sd.cwiseInverse().asDiagonal();
  for (double gamma : {0.1, 0.5, 0.9}) {
    const Matrix expected =
        sd.asDiagonal() * (gamma * corr + (1.0 - gamma) * Matrix::Identity(4, 4)) * sd.asDiagonal();
    EXPECT_LT((warton_covariance(s, gamma) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Warton, LinearInGamma) {
  auto rng = test_stream(58);
  const Matrix s = testing::random_spd(rng, 5);
  const Matrix a = warton_covariance(s, 0.2);
  const Matrix b = warton_covariance(s, 0.8);
  EXPECT_LT((warton_covariance(s, 0.5) - 0.5 * (a + b)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Warton, PositiveDefiniteForAnyGammaOnSpdInput) {
  auto rng = test_stream(59);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix s = testing::random_spd(rng, 5, 0.01);
    for (double gamma : {0.0, 0.3, 0.7, 1.0}) ASSERT_TRUE(cholesky_lower(warton_covariance(s, gamma)).has_value());
  }
}

TEST(Warton, CorrelationVersion) {
  EXPECT_NEAR(warton_correlation(two_by_two(1.0, 0.6, 1.0), 0.25)(0, 1), 0.15, 1e-15);
  EXPECT_EQ(warton_correlation(two_by_two(1.0, 0.6, 1.0), 0.25)(1, 1), 1.0);
  EXPECT_THROW(warton_correlation(two_by_two(1.0, 0.6, 1.0), 1.5), DomainError);
  EXPECT_THROW(warton_covariance(two_by_two(1.0, 0.6, 1.0), -0.1), DomainError);
}

// dispatch ----------------------------------------------------------------

TEST(Shrinkage, SpecDispatch) {
  const Matrix s = two_by_two(1.0, 0.5, 1.0);
  EXPECT_EQ(shrink_covariance(s, ShrinkageSpec::none()), s);
  EXPECT_EQ(shrink_covariance(s, ShrinkageSpec::warton(0.5)), warton_covariance(s, 0.5));
  EXPECT_EQ(shrink_covariance(s, ShrinkageSpec::glasso(0.2)), glasso(s, 0.2).covariance);
  EXPECT_EQ(shrink_correlation(s, ShrinkageSpec::warton(0.5)), warton_correlation(s, 0.5));
}

TEST(Shrinkage, SpecValidation) {
  EXPECT_NO_THROW(ShrinkageSpec::warton(1.0).validate());
  EXPECT_THROW(ShrinkageSpec::warton(1.01).validate(), DomainError);
  EXPECT_NO_THROW(ShrinkageSpec::glasso(3.0).validate());
  EXPECT_THROW(ShrinkageSpec::glasso(-1.0).validate(), DomainError);
  EXPECT_THROW(ShrinkageSpec::glasso(NAN).validate(), DomainError);
}

TEST(Shrinkage, NamesParse) {
  EXPECT_EQ(parse_shrinkage_kind("Warton"), ShrinkageKind::Warton);
  EXPECT_EQ(parse_shrinkage_kind("warton"), ShrinkageKind::Warton);
  EXPECT_EQ(parse_shrinkage_kind("GLASSO"), ShrinkageKind::Glasso);
  EXPECT_EQ(parse_shrinkage_kind("none"), ShrinkageKind::None);
  EXPECT_THROW(parse_shrinkage_kind("ridge"), DomainError);
  EXPECT_EQ(to_string(ShrinkageKind::Warton), "Warton");
}

}  // namespace
}  // namespace synlik
