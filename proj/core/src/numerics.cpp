#include "synlik/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "synlik/error.hpp"

namespace synlik {

MomentEstimates moments(const SummaryMatrix& s) {
  const Eigen::Index n = s.rows();
  if (n < 2) {
    throw InsufficientSimulations("moments: need at least 2 simulations, got " + std::to_string(n));
  }
  MomentEstimates out;
  out.n = n;
  out.mean = s.colwise().mean().transpose();
  const Matrix centered = s.rowwise() - out.mean.transpose();
  out.covariance = Matrix::Zero(s.cols(), s.cols());
  out.covariance.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                                            1.0 / static_cast<double>(n - 1));
  // rankUpdate fills only the lower triangle.
  out.covariance.triangularView<Eigen::StrictlyUpper>() = out.covariance.transpose();
  return out;
}

std::optional<Matrix> cholesky_lower(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Matrix lower = llt.matrixL();
  for (Eigen::Index i = 0; i < lower.rows(); ++i) {
    const double diag = lower(i, i);
    if (!(diag > 0.0) || !std::isfinite(diag)) return std::nullopt;
  }
  return lower;
}

double log_det_from_cholesky(const Matrix& lower) {
  return 2.0 * lower.diagonal().array().log().sum();
}

double mvn_logpdf(const SummaryVector& x, const SummaryVector& mean, const Matrix& cov) {
  const Eigen::Index d = x.size();
  if (mean.size() != d || cov.rows() != d || cov.cols() != d) {
    throw DomainError("mvn_logpdf: dimension mismatch");
  }
  const auto lower = cholesky_lower(cov);
  if (!lower) return -std::numeric_limits<double>::infinity();
  const Vector z = lower->triangularView<Eigen::Lower>().solve(x - mean);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  return -0.5 * (static_cast<double>(d) * log_two_pi + log_det_from_cholesky(*lower) +
                 z.squaredNorm());
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("std_normal_quantile: argument must lie in (0, 1), got " + std::to_string(u));
  }
  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        ((((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
              45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
           133.14166789178437745) * r + 3.387132872796366608));
    const double den =
        ((((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
              21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
           42.313330701600911252) * r + 1.0));
    return q * num / den;
  }

  double r = std::sqrt(-std::log(q < 0.0 ? u : 1.0 - u));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
             1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
          4.6303378461565452959) * r + 1.42343711074968357734);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
             0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
          2.05319162663775882187) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
             0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
          5.4637849111641143699) * r + 6.6579046435011037772);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
             7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
          0.59983220655588793769) * r + 1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

std::vector<int> ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> out(values.size());
  for (std::size_t position = 0; position < order.size(); ++position) {
    out[order[position]] = static_cast<int>(position) + 1;
  }
  return out;
}

double sorted_quantile(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw DomainError("sorted_quantile: empty input");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SixNumberSummary six_number_summary(std::span<const double> values) {
  if (values.empty()) throw DomainError("six_number_summary: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SixNumberSummary out;
  out.min = sorted.front();
  out.first_quartile = sorted_quantile(sorted, 0.25);
  out.median = sorted_quantile(sorted, 0.5);
  out.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  out.third_quartile = sorted_quantile(sorted, 0.75);
  out.max = sorted.back();
  return out;
}

EssEstimate effective_sample_size(std::span<const double> chain) {
  const std::size_t m = chain.size();
  if (m < 2) throw InsufficientSimulations("effective_sample_size: need at least 2 draws");

  const double mean = std::accumulate(chain.begin(), chain.end(), 0.0) / static_cast<double>(m);
  std::vector<double> centered(m);
  for (std::size_t t = 0; t < m; ++t) centered[t] = chain[t] - mean;

  auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < m; ++t) acc += centered[t] * centered[t + lag];
    return acc / static_cast<double>(m);
  };

  const double gamma0 = autocov(0);
  if (!(gamma0 > 0.0)) return {0.0, true};

  // Sum Gamma_k = rho_{2k} + rho_{2k+1} while positive.
  double pair_sum = 0.0;
  for (std::size_t lag = 0; lag + 1 < m; lag += 2) {
    const double pair = (autocov(lag) + autocov(lag + 1)) / gamma0;
    if (!(pair > 0.0)) break;
    pair_sum += pair;
  }
  const double tau = std::max(-1.0 + 2.0 * pair_sum, 0.0);
  const double total = static_cast<double>(m);
  if (tau <= 0.0) return {total, false};
  return {std::clamp(total / tau, 0.0, total), false};
}

}  // namespace synlik
