#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "support.hpp"
#include "synlik/error.hpp"
#include "synlik/transform.hpp"

namespace synlik {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoundsMatrix bounds_of(std::initializer_list<std::pair<double, double>> rows) {
  BoundsMatrix b(static_cast<Eigen::Index>(rows.size()), 2);
  Eigen::Index i = 0;
  for (const auto& [lo, hi] : rows) {
    b(i, 0) = lo;
    b(i, 1) = hi;
    ++i;
  }
  return b;
}

ParamVector vec(std::initializer_list<double> values) {
  ParamVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

TEST(Transform, InfiniteBoundsAreIdentity) {
  const auto b = bounds_of({{-kInf, kInf}, {-kInf, kInf}});
  const auto theta = vec({0.3, -12.0});
  EXPECT_EQ(logit_transform(theta, b), theta);
  EXPECT_EQ(inverse_logit_transform(theta, b), theta);
  EXPECT_EQ(log_jacobian(theta, b), 0.0);
}

TEST(Transform, MidpointMapsToZero) {
  const auto b = bounds_of({{-2.0, 2.0}, {1.0, 5.0}});
  const auto t = logit_transform(vec({0.0, 3.0}), b);
  EXPECT_EQ(t(0), 0.0);
  EXPECT_EQ(t(1), 0.0);
}

TEST(Transform, LogJacobianAtMidpoint) {
  // d theta / d t = (b - a) / 4 at t = 0.
  const auto b = bounds_of({{0.0, 1.0}});
  EXPECT_NEAR(log_jacobian(vec({0.0}), b), std::log(0.25), 1e-15);
  EXPECT_NEAR(log_jacobian(vec({0.0}), bounds_of({{-2.0, 2.0}})), std::log(1.0), 1e-15);
}

TEST(Transform, RoundTrip) {
  auto rng = testing::test_stream(60);
  const auto b = bounds_of({{-2.0, 2.0}, {0.0, kInf}, {-kInf, 3.0}, {-kInf, kInf}});
  for (int trial = 0; trial < 200; ++trial) {
    const auto theta = vec({-2.0 + 4.0 * rng.uniform_open(), 10.0 * rng.uniform_open(),
                            3.0 - 5.0 * rng.uniform_open(), 4.0 * rng.normal()});
    const auto back = inverse_logit_transform(logit_transform(theta, b), b);
    ASSERT_LT((back - theta).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Transform, JacobianMatchesFiniteDifference) {
  const auto b = bounds_of({{-2.0, 2.0}, {0.5, kInf}, {-kInf, 3.0}});
  for (double t : {-3.0, -0.4, 0.0, 1.1, 2.5}) {
    double expected = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i) {
      const double h = 1e-6;
      ParamVector up = vec({t, t, t});
      ParamVector down = up;
      up(i) += h;
      down(i) -= h;
      const double derivative =
          (inverse_logit_transform(up, b)(i) - inverse_logit_transform(down, b)(i)) / (2.0 * h);
      expected += std::log(derivative);
    }
    EXPECT_NEAR(log_jacobian(vec({t, t, t}), b), expected, 1e-6) << t;
  }
}

TEST(Transform, ExtremeInputsStayInsideAndFinite) {
  const auto b = bounds_of({{-1.0, 1.0}});
  for (double t : {-800.0, -40.0, 40.0, 800.0}) {
    const double x = inverse_logit_transform(vec({t}), b)(0);
    EXPECT_GT(x, -1.0);
    EXPECT_LT(x, 1.0);
    EXPECT_TRUE(std::isfinite(log_jacobian(vec({t}), b)));
  }
}

TEST(Transform, RejectsPointsOnOrOutsideBounds) {
  const auto b = bounds_of({{0.0, 1.0}});
  EXPECT_THROW(logit_transform(vec({0.0}), b), DomainError);
  EXPECT_THROW(logit_transform(vec({1.2}), b), DomainError);
  EXPECT_THROW(logit_transform(vec({0.5, 0.5}), b), DomainError);
}

}  // namespace
}  // namespace synlik
