#include "synlik/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "synlik/error.hpp"
#include "synlik/numerics.hpp"
#include "synlik/rng.hpp"
#include "synlik/transform.hpp"

namespace synlik {

namespace {

constexpr int kInitialAttempts = 3;

}  // namespace

void MhConfig::validate(const Model& model, std::optional<Eigen::Index> summary_dim) const {
  const Eigen::Index p = model.param_dim();
  if (n < 2) throw DomainError("n must be at least 2");
  if (iterations < 0) throw DomainError("M must be non-negative");
  if (workers < 1) throw DomainError("workers must be positive");
  estimator.validate();
  const auto d = summary_dim ? summary_dim : model.summary_dim();
  if (estimator.method == EstimatorKind::Unbiased && d && n <= *d + 3) {
    throw DomainError("uBSL needs n > d + 3 (n = " + std::to_string(n) + ", d = " + std::to_string(*d) + ")");
  }
  if (estimator.method == EstimatorKind::SemiParametric && n < 3) {
    throw DomainError("semiBSL needs n >= 3");
  }
  if (cov_rand_walk.rows() != p || cov_rand_walk.cols() != p) {
    throw DomainError("cov_rand_walk must be " + std::to_string(p) + " x " + std::to_string(p));
  }
  if (!cov_rand_walk.isApprox(cov_rand_walk.transpose()) || !cholesky_lower(cov_rand_walk)) {
    throw DomainError("cov_rand_walk must be symmetric positive definite");
  }
  if (logit_bounds) {
    if (logit_bounds->rows() != p) throw DomainError("logit bounds need one row per parameter");
    for (Eigen::Index i = 0; i < p; ++i) {
      if (!((*logit_bounds)(i, 0) < (*logit_bounds)(i, 1))) {
        throw DomainError("logit bounds row " + std::to_string(i + 1) + " must have lower < upper");
      }
    }
  }
}

SlEstimate estimate_loglik(const ParamVector& theta, const SummaryVector& s_obs,
                           const SimulationRunner& runner, const MhConfig& cfg,
                           std::uint64_t stream_id) {
  const SummaryMatrix sims = runner.simulate(theta, cfg.n, stream_id);
  return estimate_synthetic_likelihood(s_obs, sims, cfg.estimator);
}

SlEstimate estimate_loglik(const ParamVector& theta, const SummaryVector& s_obs, const Model& model,
                           const MhConfig& cfg, std::uint64_t stream_id) {
  const SimulationRunner runner(model, cfg.master_seed, cfg.workers);
  return estimate_loglik(theta, s_obs, runner, cfg, stream_id);
}

Chain run_mcmc(const Model& model, const SummaryVector& s_obs, const MhConfig& cfg) {
  cfg.validate(model, s_obs.size());
  if (model.summary_dim() && *model.summary_dim() != s_obs.size()) {
    throw DomainError("observed summary has length " + std::to_string(s_obs.size()) +
                      " but the model produces " + std::to_string(*model.summary_dim()));
  }
  const SimulationRunner runner(model, cfg.master_seed, cfg.workers);
  return run_mcmc_with(model, cfg, [&](const ParamVector& theta, std::uint64_t stream_id) {
    return estimate_loglik(theta, s_obs, runner, cfg, stream_id).log_lik;
  });
}

Chain run_mcmc_with(const Model& model, const MhConfig& cfg, const LogLikelihoodFn& loglik) {
  cfg.validate(model);
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index p = model.param_dim();
  const long total = cfg.iterations;

  ParamVector theta = model.theta0();
  double log_prior = model.log_prior(theta);
  if (!(log_prior > -INFINITY)) throw InitializationError("theta0 has zero prior density");

  ParamVector state = theta;
  double log_jac = 0.0;
  if (cfg.logit_bounds) {
    state = logit_transform(theta, *cfg.logit_bounds);
    log_jac = log_jacobian(state, *cfg.logit_bounds);
  }

  double log_lik = -INFINITY;
  for (int attempt = 0; attempt < kInitialAttempts && !(log_lik > -INFINITY); ++attempt) {
    log_lik = loglik(theta, make_stream_id(StreamPurpose::Initial, static_cast<std::uint64_t>(attempt)));
  }
  if (!(log_lik > -INFINITY)) {
    throw InitializationError(
        "the synthetic likelihood at theta0 was -infinity in " + std::to_string(kInitialAttempts) +
        " attempts; choose a theta0 with non-negligible posterior support");
  }

  const Matrix proposal_chol = *cholesky_lower(cfg.cov_rand_walk);

  Chain chain;
  chain.theta.resize(total + 1, p);
  chain.loglike.resize(total + 1);
  chain.theta.row(0) = theta.transpose();
  chain.loglike(0) = log_lik;

  const long report_every = std::max(1L, total / 100);
  Vector z(p);
  for (long i = 1; i <= total; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    RngStream proposal_rng(cfg.master_seed, make_stream_id(StreamPurpose::Proposal, index));
    for (Eigen::Index k = 0; k < p; ++k) z(k) = proposal_rng.normal();
    const ParamVector candidate_state = state + proposal_chol * z;
    const ParamVector candidate =
        cfg.logit_bounds ? inverse_logit_transform(candidate_state, *cfg.logit_bounds) : candidate_state;

    const double candidate_prior = model.log_prior(candidate);
    if (!(candidate_prior > -INFINITY)) {
      ++chain.early_rejected;
    } else {
      ++chain.simulated_proposals;
      const double candidate_lik = loglik(candidate, make_stream_id(StreamPurpose::Simulation, index));
      if (candidate_lik > -INFINITY) {
        const double candidate_jac =
            cfg.logit_bounds ? log_jacobian(candidate_state, *cfg.logit_bounds) : 0.0;
        const double log_ratio =
            (candidate_lik + candidate_prior + candidate_jac) - (log_lik + log_prior + log_jac);
        RngStream accept_rng(cfg.master_seed, make_stream_id(StreamPurpose::Accept, index));
        if (std::log(accept_rng.uniform_open()) < log_ratio) {
          state = candidate_state;
          theta = candidate;
          log_prior = candidate_prior;
          log_lik = candidate_lik;
          log_jac = candidate_jac;
          ++chain.accepted;
        }
      }
    }
    chain.theta.row(i) = theta.transpose();
    chain.loglike(i) = log_lik;

    if (cfg.verbose && i % report_every == 0) {
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const double eta = elapsed / static_cast<double>(i) * static_cast<double>(total - i);
      spdlog::info("iteration {}/{}  acceptance rate {:.4f}  eta {:.1f}s", i, total,
                   static_cast<double>(chain.accepted) / static_cast<double>(i), eta);
    }
  }

  if (total > 0) {
    chain.acceptance_rate = static_cast<double>(chain.accepted) / static_cast<double>(total);
    chain.early_rejection_rate = static_cast<double>(chain.early_rejected) / static_cast<double>(total);
  }
  chain.elapsed = std::chrono::steady_clock::now() - start;
  return chain;
}

}  // namespace synlik
