#include "synlik/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>
#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/global_control.h>
#include <tbb/task_arena.h>

#include "synlik/error.hpp"
#include "synlik/rng.hpp"
#include "synlik/simulation.hpp"

namespace synlik {

namespace {

constexpr double kDropFraction = 0.10;

double sample_sd(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

void PenaltySelectionConfig::validate() const {
  if (n_values.empty()) throw DomainError("penalty selection: n_values is empty");
  if (candidates.size() != n_values.size()) {
    throw DomainError("penalty selection: need one candidate list per n");
  }
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 3) throw DomainError("penalty selection: every n must be at least 3");
    if (candidates[i].empty()) {
      throw DomainError("penalty selection: candidate list for n = " + std::to_string(n_values[i]) + " is empty");
    }
    for (double c : candidates[i]) {
      ShrinkageSpec{shrinkage, c}.validate();
    }
  }
  if (repeats < 2) throw DomainError("penalty selection: need at least 2 repeats");
  if (!(sigma_target > 0.0)) throw DomainError("penalty selection: sigma target must be positive");
  if (method == EstimatorKind::Unbiased) throw DomainError("penalty selection supports BSL and semiBSL only");
  if (shrinkage == ShrinkageKind::None) throw DomainError("penalty selection needs glasso or Warton shrinkage");
  if (workers < 1) throw DomainError("penalty selection: workers must be positive");
}

bool PenaltyGrid::any_selected() const {
  return std::any_of(selected.begin(), selected.end(), [](const auto& s) { return s.has_value(); });
}

PenaltyGrid select_penalty(const SummaryVector& s_obs, const Model& model, const ParamVector& theta,
                           const PenaltySelectionConfig& config) {
  config.validate();
  const std::size_t num_n = config.n_values.size();
  const int n_max = *std::max_element(config.n_values.begin(), config.n_values.end());
  const auto repeats = static_cast<std::size_t>(config.repeats);

  // loglik[i][k][m]
  std::vector<std::vector<std::vector<double>>> loglik(num_n);
  for (std::size_t i = 0; i < num_n; ++i) {
    loglik[i].assign(config.candidates[i].size(), std::vector<double>(repeats, 0.0));
  }

  const SimulationRunner runner(model, config.master_seed, 1);
  auto run_repeat = [&](std::size_t m) {
    const SummaryMatrix sims = runner.simulate(theta, n_max, make_stream_id(StreamPurpose::PenaltyRepeat, m));
    for (std::size_t i = 0; i < num_n; ++i) {
      const SummaryMatrix subset = sims.topRows(config.n_values[i]);
      for (std::size_t k = 0; k < config.candidates[i].size(); ++k) {
        const ShrinkageSpec spec{config.shrinkage, config.candidates[i][k]};
        const SlEstimate est = config.method == EstimatorKind::Standard
                                   ? standard_sl(s_obs, subset, spec)
                                   : semiparam_sl(s_obs, subset, spec);
        loglik[i][k][m] = est.log_lik;
      }
    }
  };

  if (config.workers > 1) {
    tbb::global_control parallelism(tbb::global_control::max_allowed_parallelism,
                                    static_cast<std::size_t>(config.workers));
    tbb::task_arena arena(config.workers);
    arena.execute([&] {
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, repeats, 1),
                        [&](const tbb::blocked_range<std::size_t>& range) {
                          for (std::size_t m = range.begin(); m != range.end(); ++m) run_repeat(m);
                        });
    });
  } else {
    for (std::size_t m = 0; m < repeats; ++m) run_repeat(m);
  }

  PenaltyGrid grid;
  grid.n_values = config.n_values;
  grid.candidates = config.candidates;
  grid.repeats = config.repeats;
  grid.sigma_target = config.sigma_target;
  grid.sigma_hat.resize(num_n);
  grid.finite_repeats.resize(num_n);
  grid.selected.resize(num_n);
  grid.selected_sigma.resize(num_n);

  for (std::size_t i = 0; i < num_n; ++i) {
    const auto& cands = config.candidates[i];
    grid.sigma_hat[i].assign(cands.size(), std::numeric_limits<double>::quiet_NaN());
    grid.finite_repeats[i].assign(cands.size(), 0);
    for (std::size_t k = 0; k < cands.size(); ++k) {
      std::vector<double> finite;
      for (double v : loglik[i][k]) {
        if (std::isfinite(v)) finite.push_back(v);
      }
      const std::size_t dropped = repeats - finite.size();
      grid.finite_repeats[i][k] = static_cast<int>(finite.size());
      if (dropped > 0) {
        if (static_cast<double>(dropped) < kDropFraction * static_cast<double>(repeats) && finite.size() >= 2) {
          spdlog::warn("n = {}, penalty = {}: dropped {} of {} repeats with -inf log-likelihood",
                       config.n_values[i], cands[k], dropped, repeats);
        } else {
          spdlog::warn("n = {}, penalty = {}: {} of {} repeats gave -inf log-likelihood; cell excluded",
                       config.n_values[i], cands[k], dropped, repeats);
          continue;
        }
      }
      grid.sigma_hat[i][k] = sample_sd(finite);
    }

    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const double s = grid.sigma_hat[i][k];
      if (std::isnan(s)) continue;
      if (!best) {
        best = k;
        continue;
      }
      const double gap = std::fabs(s - config.sigma_target);
      const double best_gap = std::fabs(grid.sigma_hat[i][*best] - config.sigma_target);
      if (gap < best_gap || (gap == best_gap && cands[k] > cands[*best])) best = k;
    }
    if (best) {
      grid.selected[i] = cands[*best];
      grid.selected_sigma[i] = grid.sigma_hat[i][*best];
    } else {
      spdlog::warn("n = {}: no valid penalty candidate", config.n_values[i]);
    }
  }
  return grid;
}

}  // namespace synlik
