#include "sl/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>

#include "sl/io.hpp"
#include "sl/model_loader.hpp"
#include "synlik/error.hpp"
#include "synlik/numerics.hpp"
#include "synlik/penalty.hpp"
#include "synlik/sampler.hpp"

namespace sl {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kDiagnosticsSchema = "sl-diagnostics/1";
constexpr const char* kSummarySchema = "sl-summary/1";
constexpr const char* kPenaltySchema = "sl-penalty/1";

ordered_json six_numbers_json(const synlik::SixNumberSummary& s) {
  return {{"min", s.min},       {"first_quartile", s.first_quartile}, {"median", s.median},
          {"mean", s.mean},     {"third_quartile", s.third_quartile}, {"max", s.max}};
}

std::vector<double> column(const synlik::Matrix& m, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, j);
  return out;
}

// R-style "show" block: parameter summaries, loglik summary, rates.
void print_show(std::ostream& out, const ordered_json& stats, const std::vector<std::string>& names,
                double acceptance, double early_rejection) {
  static const char* labels[] = {"Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max."};
  static const char* keys[] = {"min", "first_quartile", "median", "mean", "third_quartile", "max"};
  out << "Summary of theta:\n";
  fmt::print(out, "{:<9}", "");
  for (const auto& name : names) fmt::print(out, " {:>12}", name);
  out << '\n';
  for (int r = 0; r < 6; ++r) {
    fmt::print(out, "{:<9}", labels[r]);
    for (const auto& name : names) {
      const auto& s = stats["theta_summary"][name];
      if (s.is_null()) {
        fmt::print(out, " {:>12}", "NA");
      } else {
        fmt::print(out, " {:>12.6g}", s[keys[r]].get<double>());
      }
    }
    out << '\n';
  }
  out << "Summary of loglikelihood:\n";
  for (const char* label : labels) fmt::print(out, " {:>9}", label);
  out << '\n';
  for (const char* key : keys) {
    const auto& s = stats["loglike_summary"];
    if (s.is_null()) {
      fmt::print(out, " {:>9}", "NA");
    } else {
      fmt::print(out, " {:>9.2f}", s[key].get<double>());
    }
  }
  out << '\n';
  fmt::print(out, "Acceptance Rate:\n{:.4g}\nEarly Rejection Rate:\n{:.4g}\n", acceptance, early_rejection);
}

// R-style "summary" row: n, acceptance percentage and ESS per parameter.
void print_summary_row(std::ostream& out, int n, double acceptance, const ordered_json& stats,
                       const std::vector<std::string>& names) {
  fmt::print(out, "{:>8} {:>14}", "n", "acc. rate (%)");
  for (const auto& name : names) fmt::print(out, " {:>14}", "ESS " + name);
  out << '\n';
  fmt::print(out, "{:>8} {:>14.0f}", n, 100.0 * acceptance);
  for (const auto& name : names) {
    const auto& e = stats["ess"][name];
    if (e.is_null()) {
      fmt::print(out, " {:>14}", "NA");
    } else {
      fmt::print(out, " {:>14.0f}", e.get<double>());
    }
  }
  out << '\n';
}

// Fills the MhConfig and reports problems against the config key that
// caused them.
synlik::MhConfig build_mh_config(const RunConfig& cfg, const LoadedModel& loaded) {
  synlik::MhConfig mh;
  mh.n = cfg.n;
  mh.iterations = cfg.iterations;
  mh.cov_rand_walk = *cfg.cov_rand_walk;
  mh.estimator = {cfg.method, cfg.shrinkage, cfg.use_rank_correlation};
  mh.logit_bounds = cfg.logit_bounds;
  mh.master_seed = cfg.master_seed;
  mh.workers = cfg.workers;
  mh.verbose = cfg.verbose;
  try {
    mh.validate(*loaded.model, loaded.summary_dim);
  } catch (const synlik::DomainError& e) {
    const std::string msg = e.what();
    std::string key = "method";
    if (msg.rfind("cov_rand_walk", 0) == 0) key = "cov_rand_walk";
    else if (msg.rfind("logit", 0) == 0) key = "logit_bounds";
    else if (msg.rfind("workers", 0) == 0) key = "workers";
    else if (msg.rfind("M ", 0) == 0) key = "M";
    else if (msg.rfind("n ", 0) == 0 || msg.rfind("uBSL needs", 0) == 0 || msg.rfind("semiBSL needs", 0) == 0) key = "n";
    else if (msg.find("penalty") != std::string::npos) key = "penalty";
    config_fail(cfg, key, msg);
  }
  if (cfg.logit_bounds) {
    const auto& theta0 = loaded.model->theta0();
    for (Eigen::Index i = 0; i < theta0.size(); ++i) {
      if (!(theta0(i) > (*cfg.logit_bounds)(i, 0) && theta0(i) < (*cfg.logit_bounds)(i, 1))) {
        config_fail(cfg, "logit_bounds", "theta0[" + std::to_string(i + 1) + "] lies outside the logit bounds");
      }
    }
  }
  return mh;
}

void report(const std::exception& e) { spdlog::error("{}", e.what()); }

}  // namespace

Draws select_draws(const synlik::Matrix& theta, const synlik::Vector& loglike, long burn_in, long thin) {
  if (burn_in < 0) throw std::invalid_argument("burn-in must be non-negative");
  if (thin < 1) throw std::invalid_argument("thin must be at least 1");
  const long iterations = static_cast<long>(theta.rows()) - 1;
  Draws draws;
  if (iterations <= 0) {
    draws.theta.resize(0, theta.cols());
    draws.loglike.resize(0);
    return draws;
  }
  if (burn_in >= iterations) {
    throw std::invalid_argument("empty chain after burn-in (burn-in " + std::to_string(burn_in) + " >= " +
                                std::to_string(iterations) + " iterations)");
  }
  const long available = iterations - burn_in;
  const long kept = (available + thin - 1) / thin;
  draws.theta.resize(kept, theta.cols());
  draws.loglike.resize(kept);
  for (long k = 0; k < kept; ++k) {
    const Eigen::Index row = burn_in + 1 + k * thin;
    draws.theta.row(k) = theta.row(row);
    draws.loglike(k) = loglike(row);
  }
  return draws;
}

ordered_json chain_statistics(const Draws& draws, const std::vector<std::string>& names) {
  ordered_json stats;
  const Eigen::Index m = draws.theta.rows();
  stats["draws"] = m;
  ordered_json ess = ordered_json::object();
  ordered_json summaries = ordered_json::object();
  for (Eigen::Index j = 0; j < draws.theta.cols(); ++j) {
    const auto values = column(draws.theta, j);
    const auto& name = names[static_cast<std::size_t>(j)];
    ess[name] = m >= 2 ? ordered_json(synlik::effective_sample_size(values).value) : ordered_json(nullptr);
    summaries[name] = m >= 1 ? six_numbers_json(synlik::six_number_summary(values)) : ordered_json(nullptr);
  }
  stats["ess"] = ess;
  stats["theta_summary"] = summaries;
  if (m >= 1) {
    std::vector<double> ll(draws.loglike.data(), draws.loglike.data() + draws.loglike.size());
    stats["loglike_summary"] = six_numbers_json(synlik::six_number_summary(ll));
  } else {
    stats["loglike_summary"] = nullptr;
  }
  return stats;
}

int run_command(const std::string& config_source, const Overrides& overrides, std::ostream& out) {
  RunConfig cfg;
  LoadedModel loaded;
  synlik::MhConfig mh;
  try {
    cfg = load_config(config_source, ConfigPurpose::Run, overrides);
    loaded = load_model(cfg, cfg.workers);
    mh = build_mh_config(cfg, loaded);
  } catch (const ConfigError& e) {
    report(e);
    return kExitConfig;
  } catch (const synlik::InitializationError& e) {
    report(e);
    return kExitInitialization;
  }

  synlik::Chain chain;
  try {
    chain = synlik::run_mcmc(*loaded.model, loaded.s_obs, mh);
  } catch (const synlik::SimulationFailure& e) {
    spdlog::error("{} (replicate index {})", e.what(), e.replicate());
    return kExitSimulation;
  } catch (const synlik::InitializationError& e) {
    report(e);
    return kExitInitialization;
  }

  ordered_json diagnostics;
  try {
    fs::create_directories(cfg.output_dir);
    write_text(cfg.output_dir / "theta.csv", matrix_csv(loaded.param_names, chain.theta));
    write_text(cfg.output_dir / "loglike.csv", matrix_csv({"loglike"}, chain.loglike));

    const auto stats = chain_statistics(select_draws(chain.theta, chain.loglike, 0, 1), loaded.param_names);
    diagnostics["schema"] = kDiagnosticsSchema;
    diagnostics["method"] = std::string(synlik::to_string(cfg.method));
    diagnostics["n"] = cfg.n;
    diagnostics["iterations"] = cfg.iterations;
    diagnostics["parameters"] = loaded.param_names;
    diagnostics["acceptance_rate"] = chain.acceptance_rate;
    diagnostics["early_rejection_rate"] = chain.early_rejection_rate;
    diagnostics["accepted"] = chain.accepted;
    diagnostics["early_rejected"] = chain.early_rejected;
    diagnostics["simulated_proposals"] = chain.simulated_proposals;
    diagnostics["simulator_calls"] = loaded.pool ? ordered_json(loaded.pool->calls()) : ordered_json(nullptr);
    for (const auto& [key, value] : stats.items()) diagnostics[key] = value;
    diagnostics["elapsed_seconds"] = chain.elapsed.count();
    diagnostics["config"] = cfg.to_json();
    write_json(cfg.output_dir / "diagnostics.json", diagnostics);
    print_show(out, stats, loaded.param_names, chain.acceptance_rate, chain.early_rejection_rate);
  } catch (const std::exception& e) {
    spdlog::error("writing results: {}", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

int select_penalty_command(const std::string& config_source, const Overrides& overrides, std::ostream& out) {
  RunConfig cfg;
  LoadedModel loaded;
  synlik::PenaltySelectionConfig pcfg;
  synlik::ParamVector theta;
  try {
    cfg = load_config(config_source, ConfigPurpose::SelectPenalty, overrides);
    loaded = load_model(cfg, cfg.workers);
    theta = cfg.penalty_theta.value_or(loaded.model->theta0());
    if (theta.size() != loaded.model->param_dim()) config_fail(cfg, "penalty_theta", "penalty_theta has the wrong length");
    if (!(loaded.model->log_prior(theta) > -INFINITY)) {
      config_fail(cfg, "penalty_theta", "penalty_theta has zero prior density");
    }
    pcfg.n_values = cfg.n_values;
    pcfg.candidates = cfg.penalty_candidates;
    pcfg.repeats = cfg.penalty_repeats;
    pcfg.sigma_target = cfg.sigma_target;
    pcfg.method = cfg.method;
    pcfg.shrinkage = cfg.shrinkage.kind;
    pcfg.master_seed = cfg.master_seed;
    pcfg.workers = cfg.workers;
    try {
      pcfg.validate();
    } catch (const synlik::DomainError& e) {
      config_fail(cfg, "n_values", e.what());
    }
  } catch (const ConfigError& e) {
    report(e);
    return kExitConfig;
  } catch (const synlik::InitializationError& e) {
    report(e);
    return kExitInitialization;
  }

  synlik::PenaltyGrid grid;
  try {
    grid = synlik::select_penalty(loaded.s_obs, *loaded.model, theta, pcfg);
  } catch (const synlik::SimulationFailure& e) {
    spdlog::error("{} (replicate index {})", e.what(), e.replicate());
    return kExitSimulation;
  }

  try {
    fs::create_directories(cfg.output_dir);
    std::string csv = "n,penalty,sigma_hat\n";
    ordered_json selected = ordered_json::array();
    std::vector<std::string> rows;
    std::size_t row_index = 0;
    for (std::size_t i = 0; i < grid.n_values.size(); ++i) {
      std::optional<std::size_t> chosen_row;
      for (std::size_t k = 0; k < grid.candidates[i].size(); ++k) {
        ++row_index;
        csv += fmt::format("{},{},{}\n", grid.n_values[i], format_double(grid.candidates[i][k]),
                           format_double(grid.sigma_hat[i][k]));
        if (grid.selected[i] && grid.candidates[i][k] == *grid.selected[i]) chosen_row = row_index;
      }
      ordered_json entry;
      entry["n"] = grid.n_values[i];
      entry["penalty"] = grid.selected[i] ? ordered_json(*grid.selected[i]) : ordered_json(nullptr);
      entry["sigma"] = grid.selected_sigma[i] ? ordered_json(*grid.selected_sigma[i]) : ordered_json(nullptr);
      entry["grid_row"] = chosen_row ? ordered_json(*chosen_row) : ordered_json(nullptr);
      selected.push_back(entry);
      if (grid.selected[i]) {
        rows.push_back(fmt::format("{:<4} {:>4} {:>9.5g} {:>5.2f}", *chosen_row, grid.n_values[i], *grid.selected[i],
                                   *grid.selected_sigma[i]));
      } else {
        spdlog::warn("no valid penalty for n = {}: every candidate had too many -inf log-likelihoods", grid.n_values[i]);
        rows.push_back(fmt::format("{:<4} {:>4} {:>9} {:>5}", "-", grid.n_values[i], "NA", "NA"));
      }
    }
    write_text(cfg.output_dir / "penalty_grid.csv", csv);

    ordered_json doc;
    doc["schema"] = kPenaltySchema;
    doc["method"] = std::string(synlik::to_string(cfg.method));
    doc["shrinkage"] = std::string(synlik::to_string(cfg.shrinkage.kind));
    doc["sigma_target"] = grid.sigma_target;
    doc["repeats"] = grid.repeats;
    doc["theta"] = std::vector<double>(theta.data(), theta.data() + theta.size());
    doc["selected"] = selected;
    doc["config"] = cfg.to_json();
    write_json(cfg.output_dir / "penalty_selected.json", doc);

    out << "Penalty selected based on the standard deviation of the loglikelihood:\n";
    out << fmt::format("{:<4} {:>4} {:>9} {:>5}\n", "", "n", "penalty", "sigma");
    for (const auto& row : rows) out << row << '\n';
  } catch (const std::exception& e) {
    spdlog::error("writing results: {}", e.what());
    return kExitUsage;
  }
  return grid.any_selected() ? kExitOk : kExitNoPenalty;
}

int summary_command(const fs::path& run_dir, long burn_in, long thin, std::ostream& out) {
  CsvTable theta;
  CsvTable loglike;
  json diagnostics;
  for (const char* name : {"theta.csv", "loglike.csv", "diagnostics.json"}) {
    if (!fs::exists(run_dir / name)) {
      spdlog::error("{}: missing {} (not a completed run directory)", run_dir.string(), name);
      return kExitConfig;
    }
  }
  Draws draws;
  try {
    theta = read_csv(run_dir / "theta.csv");
    loglike = read_csv(run_dir / "loglike.csv");
    diagnostics = read_json(run_dir / "diagnostics.json");
    if (theta.values.rows() != loglike.values.rows() || loglike.values.cols() != 1 || theta.values.rows() == 0) {
      throw std::runtime_error("theta.csv and loglike.csv do not describe the same chain");
    }
    draws = select_draws(theta.values, loglike.values.col(0), burn_in, thin);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }

  const auto stats = chain_statistics(draws, theta.header);
  const double acceptance = diagnostics.value("acceptance_rate", std::nan(""));
  const double early = diagnostics.value("early_rejection_rate", std::nan(""));
  const int n = diagnostics.value("n", 0);

  ordered_json doc;
  doc["schema"] = kSummarySchema;
  doc["run_dir"] = fs::absolute(run_dir).lexically_normal().string();
  doc["burn_in"] = burn_in;
  doc["thin"] = thin;
  doc["n"] = n;
  doc["parameters"] = theta.header;
  doc["acceptance_rate"] = acceptance;
  doc["early_rejection_rate"] = early;
  for (const auto& [key, value] : stats.items()) doc[key] = value;
  try {
    write_json(run_dir / "summary.json", doc);
  } catch (const std::exception& e) {
    spdlog::error("writing results: {}", e.what());
    return kExitUsage;
  }

  print_summary_row(out, n, acceptance, stats, theta.header);
  print_show(out, stats, theta.header, acceptance, early);
  return kExitOk;
}

}  // namespace sl
