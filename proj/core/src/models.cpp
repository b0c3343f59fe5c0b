#include "synlik/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "synlik/error.hpp"

namespace synlik::models {

Ma2Params Ma2Params::from_vector(const ParamVector& theta) {
  if (theta.size() != 2) {
    throw DomainError("MA(2) expects 2 parameters, got " + std::to_string(theta.size()));
  }
  return {theta(0), theta(1)};
}

ParamVector Ma2Params::to_vector() const {
  return (ParamVector(2) << theta1, theta2).finished();
}

bool Ma2Params::in_support() const {
  return theta2 > -1.0 && theta2 < 1.0 && theta1 + theta2 > -1.0 && theta1 - theta2 < 1.0;
}

std::vector<double> ma2_simulate(RngStream& rng, const Ma2Params& theta, int length) {
  if (length < 3) throw DomainError("MA(2): series length must be at least 3");
  const auto t_len = static_cast<std::size_t>(length);
  std::vector<double> z(t_len + 2);
  for (double& v : z) v = rng.normal();
  std::vector<double> y(t_len);
  for (std::size_t t = 0; t < t_len; ++t) {
    y[t] = z[t + 2] + theta.theta1 * z[t + 1] + theta.theta2 * z[t];
  }
  return y;
}

double ma2_log_prior(const Ma2Params& theta) {
  return theta.in_support() ? 0.0 : -INFINITY;
}

Matrix ma2_true_covariance(const Ma2Params& theta, int length) {
  const double var = 1.0 + theta.theta1 * theta.theta1 + theta.theta2 * theta.theta2;
  const double lag1 = theta.theta1 + theta.theta1 * theta.theta2;
  const double lag2 = theta.theta2;
  Matrix cov = Matrix::Zero(length, length);
  for (int i = 0; i < length; ++i) {
    cov(i, i) = var;
    if (i + 1 < length) cov(i, i + 1) = cov(i + 1, i) = lag1;
    if (i + 2 < length) cov(i, i + 2) = cov(i + 2, i) = lag2;
  }
  return cov;
}

Model make_ma2_model(int length, Model::Options options) {
  return make_ma2_model(Ma2Params{kMa2TrueTheta1, kMa2TrueTheta2}.to_vector(), length, options);
}

Model make_ma2_model(const ParamVector& theta0, int length, Model::Options options) {
  if (length < 3) throw DomainError("MA(2): series length must be at least 3");
  auto simulate = [length](RngStream& rng, const ParamVector& theta) {
    return ma2_simulate(rng, Ma2Params::from_vector(theta), length);
  };
  auto summarize = [](const Model::RawData& y) {
    return SummaryVector(Eigen::Map<const SummaryVector>(y.data(), static_cast<Eigen::Index>(y.size())));
  };
  auto log_prior = [](const ParamVector& theta) { return ma2_log_prior(Ma2Params::from_vector(theta)); };
  return Model(simulate, summarize, theta0, log_prior, std::nullopt, {}, options);
}

const std::vector<double>& ma2_observed_data() {
  static const std::vector<double> data = {
#include "ma2_observed.inc"
  };
  return data;
}

Matrix ma2_default_proposal_cov() {
  Matrix cov(2, 2);
  cov <<
#include "ma2_proposal_cov.inc"
      ;
  return cov;
}

GaussianToyModel::GaussianToyModel(double prior_mean, double prior_sd, double obs_noise_sd, int n_obs)
    : prior_mean_(prior_mean), prior_sd_(prior_sd), obs_noise_sd_(obs_noise_sd), n_obs_(n_obs) {
  if (!(prior_sd > 0.0) || !(obs_noise_sd > 0.0)) {
    throw DomainError("gaussian toy model: standard deviations must be positive");
  }
  if (n_obs < 1) throw DomainError("gaussian toy model: n_obs must be positive");
}

NormalPosterior GaussianToyModel::posterior(double observed_mean) const {
  const double prior_precision = 1.0 / (prior_sd_ * prior_sd_);
  const double data_precision = static_cast<double>(n_obs_) / (obs_noise_sd_ * obs_noise_sd_);
  const double precision = prior_precision + data_precision;
  return {(prior_precision * prior_mean_ + data_precision * observed_mean) / precision,
          1.0 / std::sqrt(precision)};
}

double GaussianToyModel::exact_log_likelihood(double theta, double observed_mean) const {
  const double var = obs_noise_sd_ * obs_noise_sd_ / static_cast<double>(n_obs_);
  const double diff = observed_mean - theta;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
}

Model GaussianToyModel::model(Model::Options options) const {
  return model(prior_mean_, options);
}

Model GaussianToyModel::model(double theta0, Model::Options options) const {
  const double noise = obs_noise_sd_;
  const int count = n_obs_;
  auto simulate = [noise, count](RngStream& rng, const ParamVector& theta) {
    if (theta.size() != 1) throw DomainError("gaussian toy model has one parameter");
    Model::RawData x(static_cast<std::size_t>(count));
    for (double& v : x) v = theta(0) + noise * rng.normal();
    return x;
  };
  auto summarize = [](const Model::RawData& x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    return SummaryVector::Constant(1, sum / static_cast<double>(x.size()));
  };
  const double mean = prior_mean_;
  const double sd = prior_sd_;
  auto log_prior = [mean, sd](const ParamVector& theta) {
    const double z = (theta(0) - mean) / sd;
    return -0.5 * z * z;
  };
  return Model(simulate, summarize, ParamVector::Constant(1, theta0), log_prior, std::nullopt, {}, options);
}

GaussianToyModel gaussian_toy_model(double prior_mean, double prior_sd, double obs_noise_sd, int n_obs) {
  return GaussianToyModel(prior_mean, prior_sd, obs_noise_sd, n_obs);
}

}  // namespace synlik::models
