#pragma once

#include <cstdint>
#include <memory>

#include "synlik/model.hpp"
#include "synlik/types.hpp"

namespace synlik {

/// Runs batches of model simulations across a fixed number of workers.
///
/// Simulation i of a batch draws from RngStream(master_seed, stream_id, i),
/// and rows are stored in simulation-index order, so the resulting matrix is
/// identical for any worker count. The one exception is a model with a
/// vectorised simulator and workers == 1, which consumes a single stream.
class SimulationRunner {
 public:
  SimulationRunner(const Model& model, std::uint64_t master_seed, int workers = 1);
  ~SimulationRunner();
  SimulationRunner(const SimulationRunner&) = delete;
  SimulationRunner& operator=(const SimulationRunner&) = delete;

  /// n x d matrix of simulated summaries at theta. Throws SimulationFailure
  /// carrying the smallest failing replicate index.
  SummaryMatrix simulate(const ParamVector& theta, int n, std::uint64_t stream_id) const;

  int workers() const { return workers_; }
  std::uint64_t master_seed() const { return master_seed_; }
  const Model& model() const { return model_; }

 private:
  struct Arena;
  const Model& model_;
  std::uint64_t master_seed_;
  int workers_;
  std::unique_ptr<Arena> arena_;
};

}  // namespace synlik
