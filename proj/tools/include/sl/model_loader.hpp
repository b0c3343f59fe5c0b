#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sl/config.hpp"
#include "sl/external_simulator.hpp"
#include "synlik/model.hpp"
#include "synlik/types.hpp"

namespace sl {

/// A model ready to sample: the simulator, its observed summary and labels.
struct LoadedModel {
  std::shared_ptr<ExternalSimulatorPool> pool;  // external models only
  std::unique_ptr<synlik::Model> model;
  synlik::SummaryVector s_obs;
  Eigen::Index summary_dim = 0;
  std::vector<std::string> param_names;
};

/// Seed sent to an external simulator for one replicate: 53 bits so it
/// survives a round trip through any JSON parser.
std::uint64_t external_seed(synlik::RngStream& rng);

/// Builds the configured model. Problems with the config throw ConfigError;
/// an external simulator that fails its handshake throws
/// synlik::InitializationError.
LoadedModel load_model(const RunConfig& cfg, int workers);

}  // namespace sl
