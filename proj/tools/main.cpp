#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sl/commands.hpp"
#include "sl/config.hpp"

int main(int argc, char** argv) {
  // Data goes to files and tables to stdout; everything else to stderr.
  auto logger = spdlog::stderr_color_mt("sl");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Bayesian synthetic likelihood sampler"};
  app.require_subcommand(1);

  std::string config;
  sl::Overrides overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> n;
  std::optional<long> iterations;
  std::optional<std::string> model;
  std::optional<std::string> method;
  std::optional<std::string> shrinkage;
  std::optional<double> penalty;
  std::optional<std::string> output;
  bool verbose = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config, "Config file, or an inline JSON document");
    cmd->add_option("--seed", seed, "Master seed (overrides SL_SEED and the config)");
    cmd->add_option("--workers", workers, "Worker threads / simulator processes")->check(CLI::PositiveNumber);
    cmd->add_option("--model", model, "ma2, gaussian-toy or external");
    cmd->add_option("--method", method, "BSL, uBSL or semiBSL");
    cmd->add_option("--shrinkage", shrinkage, "none, glasso or Warton");
    cmd->add_option("-o,--output-dir", output, "Directory for the output files");
    cmd->add_flag("-v,--verbose", verbose, "Progress messages on stderr");
  };

  auto* run = app.add_subcommand("run", "Run the MCMC sampler");
  add_common(run);
  run->add_option("--n", n, "Simulations per likelihood estimate");
  run->add_option("--M", iterations, "MCMC iterations");
  run->add_option("--penalty", penalty, "Shrinkage penalty");

  auto* select = app.add_subcommand("select-penalty", "Tune the shrinkage penalty");
  add_common(select);

  std::string run_dir;
  long burn_in = 0;
  long thin = 1;
  auto* summary = app.add_subcommand("summary", "Summarise a finished run");
  summary->add_option("run_dir", run_dir, "Output directory of a run")->required();
  summary->add_option("--burn-in", burn_in, "Iterations to discard")->check(CLI::NonNegativeNumber);
  summary->add_option("--thin", thin, "Keep every k-th draw")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sl::kExitConfig;
  }

  if (verbose) spdlog::set_level(spdlog::level::info);
  overrides.seed = seed;
  overrides.workers = workers;
  overrides.n = n;
  overrides.iterations = iterations;
  overrides.model = model;
  overrides.method = method;
  overrides.shrinkage = shrinkage;
  overrides.penalty = penalty;
  if (output) overrides.output_dir = *output;
  overrides.verbose = verbose;
  if (config.empty()) config = "{}";

  if (*run) return sl::run_command(config, overrides, std::cout);
  if (*select) return sl::select_penalty_command(config, overrides, std::cout);
  return sl::summary_command(run_dir, burn_in, thin, std::cout);
}
