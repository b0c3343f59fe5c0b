#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>

#include "synlik/estimators.hpp"
#include "synlik/model.hpp"
#include "synlik/simulation.hpp"
#include "synlik/types.hpp"

namespace synlik {

/// Settings of the pseudo-marginal random-walk Metropolis sampler.
struct MhConfig {
  /// Simulations per likelihood estimate.
  int n = 0;
  /// MCMC iterations after the initial state.
  long iterations = 0;
  /// Gaussian random-walk covariance on the sampling scale (after any logit
  /// transform).
  Matrix cov_rand_walk;
  SyntheticLikelihoodConfig estimator;
  /// When set, the chain moves on the log/logit scale of these bounds.
  std::optional<BoundsMatrix> logit_bounds;
  std::uint64_t master_seed = 0;
  int workers = 1;
  /// Emit progress to the diagnostic log every max(1, iterations/100) iterations.
  bool verbose = false;

  /// Throws DomainError describing the first invalid field.
  void validate(const Model& model, std::optional<Eigen::Index> summary_dim = std::nullopt) const;
};

/// Sampler output. Row 0 of `theta` is theta0; all rows are on the original scale.
struct Chain {
  Matrix theta;
  Vector loglike;
  double acceptance_rate = 0.0;
  double early_rejection_rate = 0.0;
  long accepted = 0;
  long early_rejected = 0;
  /// Proposals whose likelihood was estimated (i.e. not rejected early).
  long simulated_proposals = 0;
  std::chrono::duration<double> elapsed{0.0};
};

/// Likelihood callback: (theta on the original scale, stream id for its
/// simulations) -> log-likelihood estimate (may be -infinity).
using LogLikelihoodFn = std::function<double(const ParamVector&, std::uint64_t)>;

/// Simulates cfg.n summaries at theta on `stream_id` and applies the
/// configured estimator to s_obs.
SlEstimate estimate_loglik(const ParamVector& theta, const SummaryVector& s_obs,
                           const SimulationRunner& runner, const MhConfig& cfg,
                           std::uint64_t stream_id);

/// Convenience overload owning its own SimulationRunner.
SlEstimate estimate_loglik(const ParamVector& theta, const SummaryVector& s_obs, const Model& model,
                           const MhConfig& cfg, std::uint64_t stream_id);

/// MCMC with a re-simulated synthetic likelihood at every proposal.
///
/// The current state's estimate is carried forward, never refreshed.
/// Proposals with zero prior density are rejected before any simulation.
/// Throws InitializationError if three attempts at theta0 give -infinity.
Chain run_mcmc(const Model& model, const SummaryVector& s_obs, const MhConfig& cfg);

/// Same chain mechanics with a caller-supplied likelihood (used to run the
/// sampler against an exact likelihood).
Chain run_mcmc_with(const Model& model, const MhConfig& cfg, const LogLikelihoodFn& loglik);

}  // namespace synlik
