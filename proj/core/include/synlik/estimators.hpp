#pragma once

#include <string_view>

#include "synlik/shrinkage.hpp"
#include "synlik/types.hpp"

namespace synlik {

enum class EstimatorKind { Standard, Unbiased, SemiParametric };

/// "BSL", "uBSL" or "semiBSL".
std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

/// Estimated synthetic log-likelihood. log_lik may be -infinity (rejection
/// path) but is never +infinity or NaN.
struct SlEstimate {
  double log_lik = 0.0;
  EstimatorKind estimator = EstimatorKind::Standard;
  Eigen::Index n_used = 0;
};

/// Estimator choice plus shrinkage. `use_rank_correlation` swaps the sample
/// correlation of the standard estimator for the Gaussian rank correlation,
/// rescaled by the sample standard deviations.
struct SyntheticLikelihoodConfig {
  EstimatorKind method = EstimatorKind::Standard;
  ShrinkageSpec shrinkage;
  bool use_rank_correlation = false;

  /// Throws DomainError for unsupported combinations (e.g. uBSL with shrinkage).
  void validate() const;
};

/// Gaussian synthetic likelihood with plug-in sample mean and (optionally
/// shrunk) covariance.
SlEstimate standard_sl(const SummaryVector& s_obs, const SummaryMatrix& s_sim,
                       const ShrinkageSpec& shrinkage = {}, bool use_rank_correlation = false);

/// Quantities entering the Ghurye-Olkin estimator.
struct GhuryeOlkinTerms {
  /// (n - 1) * sample covariance.
  Matrix m_n;
  /// log[c(d, n-2) / c(d, n-1)].
  double log_c_ratio = 0.0;
  /// m_n - (s_obs - mu)(s_obs - mu)' / (1 - 1/n).
  Matrix psi_arg;
};

/// log c(k, v) = -(kv/2) log 2 - (k(k-1)/4) log pi - sum_{i=1}^k lgamma((v-i+1)/2).
double log_wishart_c(int k, double v);

GhuryeOlkinTerms ghurye_olkin_terms(const SummaryVector& s_obs, const SummaryMatrix& s_sim);

/// Unbiased estimator of the Gaussian density (Ghurye and Olkin 1969),
/// evaluated in log space. Requires n > d + 3.
SlEstimate unbiased_sl(const SummaryVector& s_obs, const SummaryMatrix& s_sim);

/// Gaussian rank correlation of the columns of `s_sim` (Boudt et al. 2012).
/// Unit diagonal, symmetric, entries in [-1, 1]. Requires n >= 3.
Matrix gaussian_rank_correlation(const SummaryMatrix& s_sim);

struct KdeValue {
  double log_density = 0.0;
  double cdf = 0.0;
};

/// Silverman's rule of thumb 0.9 min(sd, IQR/1.34) n^{-1/5}. Falls back to
/// the sd when the IQR is zero; throws DegenerateMargin if the sample is constant.
double silverman_bandwidth(const Vector& sample);

/// Gaussian-kernel density and CDF of `sample` at x with bandwidth h.
KdeValue kde_gaussian(const Vector& sample, double x, double bandwidth);
/// Same, with Silverman's bandwidth.
KdeValue kde_gaussian(const Vector& sample, double x);

/// Fitted pieces of the semi-parametric estimator at s_obs.
struct SemiParamFit {
  Matrix grc;
  Vector marginal_log_densities;
  /// G_j(s_obs_j), clamped to [1/(2n), 1 - 1/(2n)].
  Vector marginal_cdf_values;
  Vector eta_obs;
};

SemiParamFit fit_semiparametric(const SummaryVector& s_obs, const SummaryMatrix& s_sim);

/// KDE marginals joined by a Gaussian copula with (optionally shrunk) rank
/// correlation.
SlEstimate semiparam_sl(const SummaryVector& s_obs, const SummaryMatrix& s_sim,
                        const ShrinkageSpec& shrinkage = {});

/// Dispatches to the estimator selected by `config`.
SlEstimate estimate_synthetic_likelihood(const SummaryVector& s_obs, const SummaryMatrix& s_sim,
                                         const SyntheticLikelihoodConfig& config);

}  // namespace synlik
