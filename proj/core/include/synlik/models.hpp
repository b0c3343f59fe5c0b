#pragma once

#include <cstdint>
#include <vector>

#include "synlik/model.hpp"
#include "synlik/rng.hpp"
#include "synlik/types.hpp"

namespace synlik::models {

// ---------------------------------------------------------------------------
// MA(2): y_t = z_t + theta1 z_{t-1} + theta2 z_{t-2}, z iid N(0, 1), with the
// raw series as summary statistic and a uniform prior on the invertibility
// triangle.
// ---------------------------------------------------------------------------

struct Ma2Params {
  double theta1 = 0.0;
  double theta2 = 0.0;

  static Ma2Params from_vector(const ParamVector& theta);
  ParamVector to_vector() const;
  /// -1 < theta2 < 1, theta1 + theta2 > -1, theta1 - theta2 < 1.
  bool in_support() const;
};

constexpr int kMa2DefaultLength = 50;

/// Draws T + 2 standard normals from `rng` (oldest first) and returns the
/// length-T moving average.
std::vector<double> ma2_simulate(RngStream& rng, const Ma2Params& theta, int length = kMa2DefaultLength);

/// 0 inside the support, -infinity outside (unnormalised uniform prior).
double ma2_log_prior(const Ma2Params& theta);

/// Banded Toeplitz covariance of (y_1, ..., y_T).
Matrix ma2_true_covariance(const Ma2Params& theta, int length = kMa2DefaultLength);

/// Built-in MA(2) model: identity summary, triangle prior, theta0 = (0.6, 0.2).
Model make_ma2_model(int length = kMa2DefaultLength, Model::Options options = {});
/// Same with a caller-chosen starting value (must lie in the support).
Model make_ma2_model(const ParamVector& theta0, int length = kMa2DefaultLength, Model::Options options = {});

/// Seed and parameter used to generate the committed observed series.
constexpr std::uint64_t kMa2ObservedSeed = 2010;
constexpr double kMa2TrueTheta1 = 0.6;
constexpr double kMa2TrueTheta2 = 0.2;

/// The committed observed MA(2) series (T = 50, theta = (0.6, 0.2)).
const std::vector<double>& ma2_observed_data();

/// Random-walk covariance for the MA(2) example, calibrated from a pilot
/// chain on the committed data.
Matrix ma2_default_proposal_cov();

// ---------------------------------------------------------------------------
// Conjugate normal model: n_obs iid N(theta, noise_sd^2) observations
// summarised by their mean, prior theta ~ N(prior_mean, prior_sd^2).
// ---------------------------------------------------------------------------

struct NormalPosterior {
  double mean = 0.0;
  double sd = 0.0;
};

class GaussianToyModel {
 public:
  GaussianToyModel(double prior_mean, double prior_sd, double obs_noise_sd, int n_obs);

  double prior_mean() const { return prior_mean_; }
  double prior_sd() const { return prior_sd_; }
  double obs_noise_sd() const { return obs_noise_sd_; }
  int n_obs() const { return n_obs_; }

  /// Precision-weighted update given the observed sample mean.
  NormalPosterior posterior(double observed_mean) const;
  /// log N(observed_mean | theta, noise_sd^2 / n_obs).
  double exact_log_likelihood(double theta, double observed_mean) const;

  /// Simulator draws the raw sample; summary is its mean. theta0 defaults to the prior mean.
  Model model(Model::Options options = {}) const;
  Model model(double theta0, Model::Options options = {}) const;

 private:
  double prior_mean_;
  double prior_sd_;
  double obs_noise_sd_;
  int n_obs_;
};

GaussianToyModel gaussian_toy_model(double prior_mean, double prior_sd, double obs_noise_sd, int n_obs);

}  // namespace synlik::models
