#pragma once

#include <optional>
#include <span>
#include <vector>

#include "synlik/types.hpp"

namespace synlik {

/// Sample mean and (n-1)-denominator covariance of the rows of `s`.
/// Throws InsufficientSimulations when there are fewer than two rows.
MomentEstimates moments(const SummaryMatrix& s);

/// Lower Cholesky factor of a symmetric matrix, or nullopt when the matrix is
/// not numerically positive definite.
std::optional<Matrix> cholesky_lower(const Matrix& a);

/// log|A| from its lower Cholesky factor.
double log_det_from_cholesky(const Matrix& lower);

/// log N(x | mean, cov). Returns -infinity when `cov` is not positive
/// definite; the caller treats that as a rejected proposal.
double mvn_logpdf(const SummaryVector& x, const SummaryVector& mean, const Matrix& cov);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS241, PPND16). Throws DomainError
/// unless 0 < u < 1.
double std_normal_quantile(double u);

/// 1-based ranks; ties go to the earlier index.
std::vector<int> ranks(std::span<const double> values);

/// Sample quantile with linear interpolation between order statistics (the
/// "type 7" definition). `sorted` must be ascending and non-empty.
double sorted_quantile(std::span<const double> sorted, double prob);

struct SixNumberSummary {
  double min = 0.0;
  double first_quartile = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double third_quartile = 0.0;
  double max = 0.0;
};

SixNumberSummary six_number_summary(std::span<const double> values);

struct EssEstimate {
  double value = 0.0;
  /// Set when the chain has zero variance; value is then 0.
  bool degenerate = false;
};

/// Effective sample size M / tau, with the integrated autocorrelation time
/// tau truncated by Geyer's initial positive sequence. Clamped to [0, M].
EssEstimate effective_sample_size(std::span<const double> chain);

}  // namespace synlik
