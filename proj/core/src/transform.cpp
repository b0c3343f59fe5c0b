#include "synlik/transform.hpp"

#include <cmath>
#include <string>

#include "synlik/error.hpp"

namespace synlik {

namespace {

void check_shapes(const ParamVector& v, const BoundsMatrix& bounds) {
  if (bounds.rows() != v.size()) {
    throw DomainError("logit transform: bounds have " + std::to_string(bounds.rows()) +
                      " rows for a parameter of length " + std::to_string(v.size()));
  }
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

double keep_inside(double value, double lower, double upper) {
  if (std::isfinite(lower) && value <= lower) return std::nextafter(lower, upper);
  if (std::isfinite(upper) && value >= upper) return std::nextafter(upper, lower);
  return value;
}

}  // namespace

ParamVector logit_transform(const ParamVector& theta, const BoundsMatrix& bounds) {
  check_shapes(theta, bounds);
  ParamVector out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double a = bounds(i, 0);
    const double b = bounds(i, 1);
    const double x = theta(i);
    const bool has_lower = std::isfinite(a);
    const bool has_upper = std::isfinite(b);
    if ((has_lower && !(x > a)) || (has_upper && !(x < b))) {
      throw DomainError("logit transform: parameter " + std::to_string(i + 1) + " = " +
                        std::to_string(x) + " is not strictly inside its bounds");
    }
    if (has_lower && has_upper) {
      out(i) = std::log((x - a) / (b - x));
    } else if (has_lower) {
      out(i) = std::log(x - a);
    } else if (has_upper) {
      out(i) = -std::log(b - x);
    } else {
      out(i) = x;
    }
  }
  return out;
}

ParamVector inverse_logit_transform(const ParamVector& theta_tilde, const BoundsMatrix& bounds) {
  check_shapes(theta_tilde, bounds);
  ParamVector out(theta_tilde.size());
  for (Eigen::Index i = 0; i < theta_tilde.size(); ++i) {
    const double a = bounds(i, 0);
    const double b = bounds(i, 1);
    const double t = theta_tilde(i);
    const bool has_lower = std::isfinite(a);
    const bool has_upper = std::isfinite(b);
    double x;
    if (has_lower && has_upper) {
      // Anchor at the nearer bound to keep precision in the tails.
      x = t < 0.0 ? a + (b - a) / (1.0 + std::exp(-t)) : b - (b - a) / (1.0 + std::exp(t));
    } else if (has_lower) {
      x = a + std::exp(t);
    } else if (has_upper) {
      x = b - std::exp(-t);
    } else {
      x = t;
    }
    out(i) = keep_inside(x, a, b);
  }
  return out;
}

double log_jacobian(const ParamVector& theta_tilde, const BoundsMatrix& bounds) {
  check_shapes(theta_tilde, bounds);
  double total = 0.0;
  for (Eigen::Index i = 0; i < theta_tilde.size(); ++i) {
    const double a = bounds(i, 0);
    const double b = bounds(i, 1);
    const double t = theta_tilde(i);
    const bool has_lower = std::isfinite(a);
    const bool has_upper = std::isfinite(b);
    if (has_lower && has_upper) {
      total += std::log(b - a) + t - 2.0 * softplus(t);
    } else if (has_lower) {
      total += t;
    } else if (has_upper) {
      total += -t;
    }
  }
  return total;
}

}  // namespace synlik
