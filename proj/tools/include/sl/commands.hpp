#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sl/config.hpp"
#include "synlik/types.hpp"

namespace sl {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitSimulation = 3,
  kExitInitialization = 4,
  kExitNoPenalty = 5,
};

/// Posterior draws after burn-in and thinning. Row 0 of a stored chain is
/// theta0 and is never a draw; burn_in counts iterations after it.
struct Draws {
  synlik::Matrix theta;
  synlik::Vector loglike;
};

Draws select_draws(const synlik::Matrix& theta, const synlik::Vector& loglike, long burn_in, long thin);

/// ESS and six-number summaries per parameter plus the log-likelihood
/// summary. Fields are null when there are too few draws.
nlohmann::ordered_json chain_statistics(const Draws& draws, const std::vector<std::string>& names);

int run_command(const std::string& config_source, const Overrides& overrides, std::ostream& out);
int select_penalty_command(const std::string& config_source, const Overrides& overrides, std::ostream& out);
int summary_command(const std::filesystem::path& run_dir, long burn_in, long thin, std::ostream& out);

}  // namespace sl
