#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synlik/estimators.hpp"
#include "synlik/types.hpp"

namespace sl {

/// Invalid configuration; `what()` is prefixed with "file:line: ".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Child-process simulator speaking the line-delimited "sl-sim/1" protocol.
struct ExternalSimulatorSpec {
  std::vector<std::string> command;
  std::chrono::milliseconds timeout{30000};
};

enum class PriorKind { Flat, Uniform, Normal };

/// Prior for external models (built-in models carry their own).
struct PriorSpec {
  PriorKind kind = PriorKind::Flat;
  synlik::BoundsMatrix bounds;
  synlik::Vector mean;
  synlik::Vector sd;
};

/// Everything a run or a penalty selection needs, after defaults are applied.
struct RunConfig {
  std::filesystem::path source;
  /// Line of each top-level key in the source, for later error messages.
  std::map<std::string, int> key_lines;

  // Model: exactly one of a built-in name or an external simulator.
  std::string model_name;  // "ma2", "gaussian-toy" or "external"
  std::optional<ExternalSimulatorSpec> external;
  nlohmann::json model_args = nlohmann::json::object();
  std::optional<synlik::ParamVector> theta0;
  std::optional<PriorSpec> prior;
  std::vector<std::string> param_names;

  // Observed data: raw data `y` passed through the summary function, or the
  // summary `ssy` directly. Neither means the model's bundled data set.
  std::optional<std::filesystem::path> y_path;
  std::optional<std::filesystem::path> ssy_path;

  int n = 0;
  long iterations = 0;
  synlik::EstimatorKind method = synlik::EstimatorKind::Standard;
  synlik::ShrinkageSpec shrinkage;
  bool use_rank_correlation = false;
  std::optional<synlik::BoundsMatrix> logit_bounds;
  std::optional<synlik::Matrix> cov_rand_walk;
  std::uint64_t master_seed = 1;
  int workers = 1;
  long burn_in = 0;
  long thin = 1;
  std::filesystem::path output_dir = "sl-output";
  bool verbose = false;

  // Penalty selection.
  std::vector<int> n_values;
  std::vector<std::vector<double>> penalty_candidates;
  std::optional<synlik::ParamVector> penalty_theta;
  int penalty_repeats = 100;
  double sigma_target = 1.5;

  /// Resolved configuration echoed into output artifacts.
  nlohmann::json to_json() const;
};

/// Which command the config is validated for; each requires different keys.
enum class ConfigPurpose { Run, SelectPenalty };

/// Command-line overrides; unset fields leave the file value alone.
struct Overrides {
  std::optional<std::string> model;
  std::optional<std::string> method;
  std::optional<std::string> shrinkage;
  std::optional<double> penalty;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> n;
  std::optional<long> iterations;
  std::optional<std::filesystem::path> output_dir;
  bool verbose = false;
};

/// Reads and validates a JSON config. `source` is a file path, or an inline
/// document when it starts with '{'. Relative input paths are resolved
/// against the config's directory; output_dir is relative to the working
/// directory. Seed precedence: --seed, then SL_SEED, then
/// the file's master_seed.
RunConfig load_config(const std::string& source, ConfigPurpose purpose,
                      const Overrides& overrides = {});

/// Same, from an in-memory document; `origin` names it in error messages.
RunConfig parse_config(const std::string& text, const std::filesystem::path& origin,
                       ConfigPurpose purpose, const Overrides& overrides = {});

/// Throws ConfigError for `key` located at its line in the config (or on the
/// command line when a flag supplied it).
[[noreturn]] void config_fail(const RunConfig& cfg, const std::string& key, const std::string& message);

/// Expands {"log_linspace": [from, to, count]} into exp(linspace(from, to, count)).
std::vector<double> expand_candidates(const nlohmann::json& spec);

}  // namespace sl
