#include "sl/model_loader.hpp"

#include <cmath>
#include <numbers>

#include "sl/io.hpp"
#include "synlik/error.hpp"
#include "synlik/models.hpp"

namespace sl {

namespace models = synlik::models;
using nlohmann::json;

namespace {

template <typename T>
T model_arg(const RunConfig& cfg, const std::string& name, T fallback) {
  if (!cfg.model_args.contains(name)) return fallback;
  const auto& v = cfg.model_args[name];
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) config_fail(cfg, "model_args", "model_args." + name + " must be an integer");
  } else {
    if (!v.is_number()) config_fail(cfg, "model_args", "model_args." + name + " must be a number");
  }
  return v.get<T>();
}

void check_model_args(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : cfg.model_args.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) config_fail(cfg, "model_args", "unknown model_args entry '" + key + "' for model " + cfg.model_name);
  }
}

synlik::Vector load_observed(const RunConfig& cfg, const char*& key) {
  key = cfg.y_path ? "y" : "ssy";
  try {
    return read_vector(cfg.y_path ? *cfg.y_path : *cfg.ssy_path);
  } catch (const std::runtime_error& e) {
    config_fail(cfg, key, e.what());
  }
}

std::vector<std::string> default_names(Eigen::Index p) {
  std::vector<std::string> names;
  for (Eigen::Index i = 1; i <= p; ++i) names.push_back("theta" + std::to_string(i));
  return names;
}

synlik::Model::LogPriorFn make_prior(const PriorSpec& prior) {
  switch (prior.kind) {
    case PriorKind::Flat:
      return {};
    case PriorKind::Uniform:
      return [bounds = prior.bounds](const synlik::ParamVector& theta) -> double {
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
          if (!(theta(i) > bounds(i, 0) && theta(i) < bounds(i, 1))) return -INFINITY;
        }
        return 0.0;
      };
    case PriorKind::Normal:
      return [mean = prior.mean, sd = prior.sd](const synlik::ParamVector& theta) {
        const synlik::Vector z = (theta - mean).cwiseQuotient(sd);
        return -0.5 * z.squaredNorm();
      };
  }
  return {};
}

}  // namespace

std::uint64_t external_seed(synlik::RngStream& rng) {
  return rng.next_u64() & ((std::uint64_t{1} << 53) - 1);
}

LoadedModel load_model(const RunConfig& cfg, int workers) {
  LoadedModel out;
  synlik::Model::Options options;
  // Dimensions are known up front for every model kind, so no trial runs.
  options.smoke_test_sims = 0;
  const char* data_key = "model";

  if (cfg.model_name == "ma2") {
    check_model_args(cfg, {"length"});
    const int length = model_arg<int>(cfg, "length", models::kMa2DefaultLength);
    if (length < 3) config_fail(cfg, "model_args", "model_args.length must be at least 3");
    const synlik::ParamVector theta0 =
        cfg.theta0.value_or(models::Ma2Params{models::kMa2TrueTheta1, models::kMa2TrueTheta2}.to_vector());
    if (theta0.size() != 2) config_fail(cfg, "theta0", "ma2 has 2 parameters");
    if (!models::Ma2Params::from_vector(theta0).in_support()) {
      config_fail(cfg, "theta0", "theta0 lies outside the MA(2) prior support");
    }
    out.model = std::make_unique<synlik::Model>(models::make_ma2_model(theta0, length, options));
    out.summary_dim = length;
    if (cfg.y_path || cfg.ssy_path) {
      out.s_obs = load_observed(cfg, data_key);
    } else {
      if (length != models::kMa2DefaultLength) {
        config_fail(cfg, "model_args", "the bundled MA(2) data has length 50; supply 'y' for other lengths");
      }
      const auto& y = models::ma2_observed_data();
      out.s_obs = Eigen::Map<const synlik::Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
    }
    out.param_names = {"theta1", "theta2"};
  } else if (cfg.model_name == "gaussian-toy") {
    check_model_args(cfg, {"prior_mean", "prior_sd", "noise_sd", "n_obs"});
    std::optional<models::GaussianToyModel> toy;
    try {
      toy.emplace(model_arg<double>(cfg, "prior_mean", 0.0), model_arg<double>(cfg, "prior_sd", 1.0),
                  model_arg<double>(cfg, "noise_sd", 1.0), model_arg<int>(cfg, "n_obs", 10));
    } catch (const synlik::DomainError& e) {
      config_fail(cfg, "model_args", e.what());
    }
    double theta0 = toy->prior_mean();
    if (cfg.theta0) {
      if (cfg.theta0->size() != 1) config_fail(cfg, "theta0", "gaussian-toy has 1 parameter");
      theta0 = (*cfg.theta0)(0);
    }
    out.model = std::make_unique<synlik::Model>(toy->model(theta0, options));
    out.summary_dim = 1;
    const synlik::Vector data = load_observed(cfg, data_key);
    out.s_obs = cfg.y_path ? synlik::Vector::Constant(1, data.mean()) : data;
    out.param_names = {"theta"};
  } else {
    check_model_args(cfg, {});
    out.pool = std::make_shared<ExternalSimulatorPool>(*cfg.external, workers);
    const synlik::ParamVector theta0 = *cfg.theta0;
    if (theta0.size() != out.pool->param_dim()) {
      config_fail(cfg, "theta0", "theta0 has " + std::to_string(theta0.size()) + " entries but the simulator reports p = " +
                                     std::to_string(out.pool->param_dim()));
    }
    std::optional<synlik::BoundsMatrix> bounds;
    synlik::Model::LogPriorFn prior;
    if (cfg.prior) {
      const auto& spec = *cfg.prior;
      const Eigen::Index rows = spec.kind == PriorKind::Uniform ? spec.bounds.rows()
                                : spec.kind == PriorKind::Normal ? spec.mean.size()
                                                                 : theta0.size();
      if (rows != theta0.size()) config_fail(cfg, "prior", "prior dimension does not match theta0");
      if (spec.kind == PriorKind::Uniform) bounds = spec.bounds;
      prior = make_prior(spec);
      if (prior && !(prior(theta0) > -INFINITY)) config_fail(cfg, "theta0", "theta0 has zero prior density");
    }
    auto pool = out.pool;
    auto simulate = [pool](synlik::RngStream& rng, const synlik::ParamVector& theta) {
      const synlik::SummaryVector s = pool->simulate(theta, external_seed(rng));
      return synlik::Model::RawData(s.data(), s.data() + s.size());
    };
    auto summarize = [](const synlik::Model::RawData& x) {
      return synlik::SummaryVector(Eigen::Map<const synlik::SummaryVector>(x.data(), static_cast<Eigen::Index>(x.size())));
    };
    out.model = std::make_unique<synlik::Model>(simulate, summarize, theta0, prior, bounds,
                                                synlik::Model::SimulateBatchFn{}, options);
    out.summary_dim = out.pool->summary_dim();
    out.s_obs = load_observed(cfg, data_key);
    out.param_names = default_names(theta0.size());
  }

  if (out.s_obs.size() != out.summary_dim) {
    config_fail(cfg, data_key, "observed summary has length " + std::to_string(out.s_obs.size()) + ", the model produces " +
                                   std::to_string(out.summary_dim));
  }
  if (!cfg.param_names.empty()) {
    if (static_cast<Eigen::Index>(cfg.param_names.size()) != out.model->param_dim()) {
      config_fail(cfg, "param_names", "param_names needs one entry per parameter");
    }
    out.param_names = cfg.param_names;
  }
  return out;
}

}  // namespace sl
