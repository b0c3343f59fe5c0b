#include "synlik/model.hpp"

#include <cmath>
#include <string>

#include "synlik/error.hpp"

namespace synlik {

Model::Model(SimulateFn simulate, SummarizeFn summarize, ParamVector theta0, LogPriorFn log_prior,
             std::optional<BoundsMatrix> bounds, SimulateBatchFn simulate_batch, Options options)
    : simulate_(std::move(simulate)),
      simulate_batch_(std::move(simulate_batch)),
      summarize_(std::move(summarize)),
      log_prior_(std::move(log_prior)),
      theta0_(std::move(theta0)),
      bounds_(std::move(bounds)) {
  if (!simulate_ && !simulate_batch_) throw DomainError("model: a simulation function is required");
  if (!summarize_) throw DomainError("model: a summary statistic function is required");
  if (theta0_.size() == 0) throw DomainError("model: theta0 must be non-empty");
  if (!theta0_.allFinite()) throw DomainError("model: theta0 must be finite");
  if (bounds_) {
    if (bounds_->rows() != theta0_.size()) {
      throw DomainError("model: bounds must have one row per parameter");
    }
    for (Eigen::Index i = 0; i < bounds_->rows(); ++i) {
      if (!((*bounds_)(i, 0) < (*bounds_)(i, 1))) {
        throw DomainError("model: lower bound must be below upper bound for parameter " +
                          std::to_string(i + 1));
      }
    }
  }
  if (!(this->log_prior(theta0_) > -INFINITY)) {
    throw DomainError("model: theta0 has zero prior density");
  }

  if (options.smoke_test_sims > 0) {
    RngStream rng(options.smoke_test_seed, make_stream_id(StreamPurpose::SmokeTest, 0));
    for (int i = 0; i < options.smoke_test_sims; ++i) {
      SummaryVector s;
      try {
        s = simulate_summary(rng, theta0_);
      } catch (const std::exception& e) {
        throw DomainError("model: smoke-test simulation " + std::to_string(i) + " failed: " + e.what());
      }
      if (s.size() == 0) throw DomainError("model: summary statistic is empty");
      if (summary_dim_ && *summary_dim_ != s.size()) {
        throw DomainError("model: summary dimension changed between smoke-test simulations (" +
                          std::to_string(*summary_dim_) + " vs " + std::to_string(s.size()) + ")");
      }
      summary_dim_ = s.size();
    }
  }
}

Model::RawData Model::simulate(RngStream& rng, const ParamVector& theta) const {
  if (simulate_) return simulate_(rng, theta);
  auto batch = simulate_batch_(rng, 1, theta);
  if (batch.size() != 1) throw DomainError("model: batch simulator returned the wrong count");
  return std::move(batch.front());
}

std::vector<Model::RawData> Model::simulate_batch(RngStream& rng, int n, const ParamVector& theta) const {
  if (simulate_batch_) return simulate_batch_(rng, n, theta);
  std::vector<RawData> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(simulate_(rng, theta));
  return out;
}

SummaryVector Model::summarize(const RawData& data) const {
  return summarize_(data);
}

SummaryVector Model::simulate_summary(RngStream& rng, const ParamVector& theta) const {
  return summarize_(simulate(rng, theta));
}

double Model::log_prior(const ParamVector& theta) const {
  if (!log_prior_) return 0.0;
  const double value = log_prior_(theta);
  if (std::isnan(value) || value == INFINITY) {
    throw DomainError("model: log prior must be finite or -infinity");
  }
  return value;
}

}  // namespace synlik
