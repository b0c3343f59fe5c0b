#include "synlik/simulation.hpp"

#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "synlik/error.hpp"

namespace synlik {

struct SimulationRunner::Arena {
  // Without the global_control TBB caps the pool at the hardware thread count;
  // workers may exceed it when simulators are external processes.
  explicit Arena(int workers)
      : parallelism(tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(workers)),
        arena(workers) {}
  tbb::global_control parallelism;
  tbb::task_arena arena;
};

SimulationRunner::SimulationRunner(const Model& model, std::uint64_t master_seed, int workers)
    : model_(model), master_seed_(master_seed), workers_(workers) {
  if (workers < 1) throw DomainError("simulation: workers must be positive");
  if (workers > 1) arena_ = std::make_unique<Arena>(workers);
}

SimulationRunner::~SimulationRunner() = default;

SummaryMatrix SimulationRunner::simulate(const ParamVector& theta, int n, std::uint64_t stream_id) const {
  if (n < 1) throw DomainError("simulation: n must be positive");
  std::vector<SummaryVector> rows(static_cast<std::size_t>(n));

  if (workers_ == 1 && model_.has_batch_simulator()) {
    RngStream rng(master_seed_, stream_id, 0);
    std::vector<Model::RawData> batch;
    try {
      batch = model_.simulate_batch(rng, n, theta);
    } catch (const std::exception& e) {
      throw SimulationFailure(0, e.what());
    }
    if (batch.size() != static_cast<std::size_t>(n)) {
      throw SimulationFailure(0, "batch simulator returned " + std::to_string(batch.size()) +
                                     " datasets, expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      try {
        rows[i] = model_.summarize(batch[i]);
      } catch (const std::exception& e) {
        throw SimulationFailure(i, e.what());
      }
    }
  } else {
    std::mutex failure_mutex;
    std::size_t first_failure = std::numeric_limits<std::size_t>::max();
    std::string failure_message;

    auto run_one = [&](std::size_t i) {
      try {
        RngStream rng(master_seed_, stream_id, static_cast<std::uint32_t>(i));
        rows[i] = model_.simulate_summary(rng, theta);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (i < first_failure) {
          first_failure = i;
          failure_message = e.what();
        }
      }
    };

    if (arena_) {
      arena_->arena.execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, rows.size()),
                          [&](const tbb::blocked_range<std::size_t>& range) {
                            for (std::size_t i = range.begin(); i != range.end(); ++i) run_one(i);
                          });
      });
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        run_one(i);
        if (first_failure != std::numeric_limits<std::size_t>::max()) break;
      }
    }
    if (first_failure != std::numeric_limits<std::size_t>::max()) {
      throw SimulationFailure(first_failure, failure_message);
    }
  }

  const Eigen::Index d = rows.front().size();
  SummaryMatrix out(n, d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw SimulationFailure(i, "summary has length " + std::to_string(rows[i].size()) +
                                     ", expected " + std::to_string(d));
    }
    if (!rows[i].allFinite()) throw SimulationFailure(i, "summary contains non-finite values");
    out.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return out;
}

}  // namespace synlik
