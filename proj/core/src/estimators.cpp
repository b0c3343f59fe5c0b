#include "synlik/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "synlik/error.hpp"
#include "synlik/numerics.hpp"

namespace synlik {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_matching_dims(const SummaryVector& s_obs, const SummaryMatrix& s_sim, const char* who) {
  if (s_obs.size() != s_sim.cols()) {
    throw DomainError(std::string(who) + ": observed summary has length " +
                      std::to_string(s_obs.size()) + " but simulations have " +
                      std::to_string(s_sim.cols()) + " columns");
  }
}

double finite_or_neg_inf(double value) {
  return std::isfinite(value) ? value : kNegInf;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Standard: return "BSL";
    case EstimatorKind::Unbiased: return "uBSL";
    case EstimatorKind::SemiParametric: return "semiBSL";
  }
  return "BSL";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "bsl") return EstimatorKind::Standard;
  if (key == "ubsl") return EstimatorKind::Unbiased;
  if (key == "semibsl") return EstimatorKind::SemiParametric;
  throw DomainError("unknown method '" + std::string(name) + "' (expected BSL, uBSL or semiBSL)");
}

void SyntheticLikelihoodConfig::validate() const {
  shrinkage.validate();
  if (method == EstimatorKind::Unbiased && shrinkage.kind != ShrinkageKind::None) {
    throw DomainError("shrinkage cannot be combined with uBSL: it breaks unbiasedness");
  }
  if (use_rank_correlation && method != EstimatorKind::Standard) {
    throw DomainError("the rank-correlation option applies to the BSL method only");
  }
}

SlEstimate standard_sl(const SummaryVector& s_obs, const SummaryMatrix& s_sim,
                       const ShrinkageSpec& shrinkage, bool use_rank_correlation) {
  require_matching_dims(s_obs, s_sim, "standard_sl");
  SlEstimate out{0.0, EstimatorKind::Standard, s_sim.rows()};
  const MomentEstimates m = moments(s_sim);
  Matrix cov = m.covariance;
  try {
    if (use_rank_correlation) {
      const Vector sd = cov.diagonal().cwiseSqrt();
      cov = sd.asDiagonal() * gaussian_rank_correlation(s_sim) * sd.asDiagonal();
    }
    cov = shrink_covariance(cov, shrinkage);
  } catch (const DegenerateMargin&) {
    out.log_lik = kNegInf;
    return out;
  }
  out.log_lik = finite_or_neg_inf(mvn_logpdf(s_obs, m.mean, cov));
  return out;
}

double log_wishart_c(int k, double v) {
  double out = -0.5 * k * v * std::numbers::ln2 -
               0.25 * k * (k - 1) * std::log(std::numbers::pi);
  for (int i = 1; i <= k; ++i) out -= std::lgamma(0.5 * (v - i + 1));
  return out;
}

GhuryeOlkinTerms ghurye_olkin_terms(const SummaryVector& s_obs, const SummaryMatrix& s_sim) {
  require_matching_dims(s_obs, s_sim, "unbiased_sl");
  const Eigen::Index n = s_sim.rows();
  const Eigen::Index d = s_sim.cols();
  if (n <= d + 3) {
    throw InsufficientSimulations("unbiased_sl: need n > d + 3 (n = " + std::to_string(n) +
                                  ", d = " + std::to_string(d) + ")");
  }
  const MomentEstimates m = moments(s_sim);
  const double nd = static_cast<double>(n);
  GhuryeOlkinTerms terms;
  terms.m_n = (nd - 1.0) * m.covariance;
  terms.log_c_ratio = log_wishart_c(static_cast<int>(d), nd - 2.0) -
                      log_wishart_c(static_cast<int>(d), nd - 1.0);
  const Vector diff = s_obs - m.mean;
  terms.psi_arg = terms.m_n - (diff * diff.transpose()) / (1.0 - 1.0 / nd);
  return terms;
}

SlEstimate unbiased_sl(const SummaryVector& s_obs, const SummaryMatrix& s_sim) {
  const GhuryeOlkinTerms terms = ghurye_olkin_terms(s_obs, s_sim);
  const double n = static_cast<double>(s_sim.rows());
  const double d = static_cast<double>(s_sim.cols());
  SlEstimate out{kNegInf, EstimatorKind::Unbiased, s_sim.rows()};

  const auto m_chol = cholesky_lower(terms.m_n);
  const auto psi_chol = cholesky_lower(terms.psi_arg);
  if (!m_chol || !psi_chol) return out;  // Psi(A) = 0

  const double log_det_m = log_det_from_cholesky(*m_chol);
  const double log_psi = log_det_from_cholesky(*psi_chol);
  const double value = -0.5 * d * std::log(2.0 * std::numbers::pi) + terms.log_c_ratio -
                       0.5 * d * std::log1p(-1.0 / n) - 0.5 * (n - d - 2.0) * log_det_m +
                       0.5 * (n - d - 3.0) * log_psi;
  out.log_lik = finite_or_neg_inf(value);
  return out;
}

Matrix gaussian_rank_correlation(const SummaryMatrix& s_sim) {
  const Eigen::Index n = s_sim.rows();
  const Eigen::Index d = s_sim.cols();
  if (n < 3) {
    throw InsufficientSimulations("gaussian_rank_correlation: need at least 3 simulations");
  }
  const double scale = static_cast<double>(n + 1);
  Matrix scores(n, d);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) column[static_cast<std::size_t>(k)] = s_sim(k, j);
    const std::vector<int> r = ranks(column);
    for (Eigen::Index k = 0; k < n; ++k) {
      scores(k, j) = std_normal_quantile(r[static_cast<std::size_t>(k)] / scale);
    }
  }
  double denom = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double z = std_normal_quantile(static_cast<double>(k) / scale);
    denom += z * z;
  }
  Matrix grc = (scores.transpose() * scores) / denom;
  for (Eigen::Index i = 0; i < d; ++i) {
    grc(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double rho = std::clamp(0.5 * (grc(i, j) + grc(j, i)), -1.0, 1.0);
      grc(i, j) = rho;
      grc(j, i) = rho;
    }
  }
  return grc;
}

double silverman_bandwidth(const Vector& sample) {
  const Eigen::Index n = sample.size();
  if (n < 2) throw InsufficientSimulations("kde: need at least 2 points for a bandwidth");
  const double mean = sample.mean();
  const double sd = std::sqrt((sample.array() - mean).square().sum() / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DegenerateMargin("kde: sample has zero spread");
  std::vector<double> sorted(sample.data(), sample.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

KdeValue kde_gaussian(const Vector& sample, double x, double bandwidth) {
  if (sample.size() < 1) throw InsufficientSimulations("kde: empty sample");
  if (!(bandwidth > 0.0)) throw DegenerateMargin("kde: bandwidth must be positive");
  double density = 0.0;
  double cdf = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double z = (x - sample(i)) / bandwidth;
    density += std_normal_pdf(z);
    cdf += std_normal_cdf(z);
  }
  const double n = static_cast<double>(sample.size());
  return {std::log(density / (n * bandwidth)), cdf / n};
}

KdeValue kde_gaussian(const Vector& sample, double x) {
  return kde_gaussian(sample, x, silverman_bandwidth(sample));
}

SemiParamFit fit_semiparametric(const SummaryVector& s_obs, const SummaryMatrix& s_sim) {
  require_matching_dims(s_obs, s_sim, "semiparam_sl");
  const Eigen::Index n = s_sim.rows();
  const Eigen::Index d = s_sim.cols();
  if (n < 3) throw InsufficientSimulations("semiparam_sl: need at least 3 simulations");

  SemiParamFit fit;
  fit.marginal_log_densities.resize(d);
  fit.marginal_cdf_values.resize(d);
  fit.eta_obs.resize(d);
  const double u_floor = 1.0 / (2.0 * static_cast<double>(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    const Vector column = s_sim.col(j);
    const KdeValue kde = kde_gaussian(column, s_obs(j));
    const double u = std::clamp(kde.cdf, u_floor, 1.0 - u_floor);
    fit.marginal_log_densities(j) = kde.log_density;
    fit.marginal_cdf_values(j) = u;
    fit.eta_obs(j) = std_normal_quantile(u);
  }
  fit.grc = gaussian_rank_correlation(s_sim);
  return fit;
}

SlEstimate semiparam_sl(const SummaryVector& s_obs, const SummaryMatrix& s_sim,
                        const ShrinkageSpec& shrinkage) {
  SlEstimate out{kNegInf, EstimatorKind::SemiParametric, s_sim.rows()};
  SemiParamFit fit;
  Matrix corr;
  try {
    fit = fit_semiparametric(s_obs, s_sim);
    corr = shrink_correlation(fit.grc, shrinkage);
  } catch (const DegenerateMargin&) {
    return out;
  }
  const double marginal_sum = fit.marginal_log_densities.sum();
  if (!std::isfinite(marginal_sum)) return out;

  const auto lower = cholesky_lower(corr);
  if (!lower) return out;
  const Vector z = lower->triangularView<Eigen::Lower>().solve(fit.eta_obs);
  const double quad = z.squaredNorm() - fit.eta_obs.squaredNorm();
  out.log_lik = finite_or_neg_inf(-0.5 * log_det_from_cholesky(*lower) - 0.5 * quad + marginal_sum);
  return out;
}

SlEstimate estimate_synthetic_likelihood(const SummaryVector& s_obs, const SummaryMatrix& s_sim,
                                         const SyntheticLikelihoodConfig& config) {
  switch (config.method) {
    case EstimatorKind::Standard:
      return standard_sl(s_obs, s_sim, config.shrinkage, config.use_rank_correlation);
    case EstimatorKind::Unbiased:
      return unbiased_sl(s_obs, s_sim);
    case EstimatorKind::SemiParametric:
      return semiparam_sl(s_obs, s_sim, config.shrinkage);
  }
  throw DomainError("unknown estimator");
}

}  // namespace synlik
