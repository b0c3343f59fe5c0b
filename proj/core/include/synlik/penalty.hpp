#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "synlik/estimators.hpp"
#include "synlik/model.hpp"
#include "synlik/types.hpp"

namespace synlik {

struct PenaltySelectionConfig {
  /// Simulation counts to tune for; the largest is simulated once per repeat
  /// and the others reuse its leading rows.
  std::vector<int> n_values;
  /// candidates[i] are the penalties tried for n_values[i].
  std::vector<std::vector<double>> candidates;
  int repeats = 100;
  double sigma_target = 1.5;
  /// BSL or semiBSL.
  EstimatorKind method = EstimatorKind::Standard;
  /// Glasso or Warton.
  ShrinkageKind shrinkage = ShrinkageKind::Glasso;
  std::uint64_t master_seed = 0;
  /// Repeats run concurrently on this many workers.
  int workers = 1;

  void validate() const;
};

/// Standard deviations of the penalised log-SL over repeats, per (n, penalty).
struct PenaltyGrid {
  std::vector<int> n_values;
  std::vector<std::vector<double>> candidates;
  /// sigma_hat[i][k]; NaN marks an invalid cell.
  std::vector<std::vector<double>> sigma_hat;
  /// Repeats that contributed to each cell.
  std::vector<std::vector<int>> finite_repeats;
  /// Chosen penalty per n; empty when every cell for that n is invalid.
  std::vector<std::optional<double>> selected;
  std::vector<std::optional<double>> selected_sigma;
  int repeats = 0;
  double sigma_target = 0.0;

  bool any_selected() const;
};

/// Picks, for each n, the candidate whose log-SL standard deviation at theta
/// is closest to sigma_target; ties go to the larger penalty.
///
/// Cells where some repeats give -infinity drop those repeats when they are
/// fewer than 10% of the total, and are marked invalid otherwise.
PenaltyGrid select_penalty(const SummaryVector& s_obs, const Model& model, const ParamVector& theta,
                           const PenaltySelectionConfig& config);

}  // namespace synlik
