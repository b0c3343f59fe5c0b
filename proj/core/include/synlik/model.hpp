#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "synlik/rng.hpp"
#include "synlik/types.hpp"

namespace synlik {

struct ModelOptions {
  /// Trial simulations run on construction; 0 skips the check.
  int smoke_test_sims = 10;
  std::uint64_t smoke_test_seed = 0;
};

/// A model defined only through simulation.
///
/// The simulator turns (stream, theta) into a raw dataset; `summarize` reduces
/// it to a d-vector. Simulator arguments (series length and the like) are
/// bound into the callables. Both callables must be safe to invoke
/// concurrently with distinct streams.
class Model {
 public:
  using RawData = std::vector<double>;
  using SimulateFn = std::function<RawData(RngStream&, const ParamVector&)>;
  /// Optional vectorised simulator producing n datasets from one stream.
  using SimulateBatchFn = std::function<std::vector<RawData>(RngStream&, int, const ParamVector&)>;
  using SummarizeFn = std::function<SummaryVector(const RawData&)>;
  /// Log prior density up to a constant; may be -infinity, never +infinity.
  using LogPriorFn = std::function<double(const ParamVector&)>;

  using Options = ModelOptions;

  /// An empty `log_prior` means an improper flat prior. Throws
  /// DomainError if theta0 has zero prior density or the smoke test fails.
  Model(SimulateFn simulate, SummarizeFn summarize, ParamVector theta0, LogPriorFn log_prior = {},
        std::optional<BoundsMatrix> bounds = std::nullopt, SimulateBatchFn simulate_batch = {},
        Options options = {});

  Eigen::Index param_dim() const { return theta0_.size(); }
  /// Summary dimension seen by the smoke test, if it ran.
  std::optional<Eigen::Index> summary_dim() const { return summary_dim_; }

  const ParamVector& theta0() const { return theta0_; }
  const std::optional<BoundsMatrix>& bounds() const { return bounds_; }
  bool has_batch_simulator() const { return static_cast<bool>(simulate_batch_); }

  RawData simulate(RngStream& rng, const ParamVector& theta) const;
  std::vector<RawData> simulate_batch(RngStream& rng, int n, const ParamVector& theta) const;
  SummaryVector summarize(const RawData& data) const;
  /// simulate then summarize.
  SummaryVector simulate_summary(RngStream& rng, const ParamVector& theta) const;
  double log_prior(const ParamVector& theta) const;

 private:
  SimulateFn simulate_;
  SimulateBatchFn simulate_batch_;
  SummarizeFn summarize_;
  LogPriorFn log_prior_;
  ParamVector theta0_;
  std::optional<BoundsMatrix> bounds_;
  std::optional<Eigen::Index> summary_dim_;
};

}  // namespace synlik
