#include "sl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "synlik/error.hpp"
#include "synlik/models.hpp"

namespace sl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "model", "external", "model_args", "theta0", "prior", "param_names", "y", "ssy",
    "n", "M", "method", "shrinkage", "penalty", "use_rank_correlation", "logit_bounds",
    "cov_rand_walk", "master_seed", "workers", "burn_in", "thin", "output_dir", "verbose",
    "n_values", "penalty_candidates", "penalty_theta", "M_repeats", "sigma_target"};

class Reader {
 public:
  Reader(const std::string& text, fs::path origin, std::set<std::string> from_flags)
      : text_(text), origin_(std::move(origin)), from_flags_(std::move(from_flags)) {}

  int line_of(std::size_t offset) const {
    offset = std::min(offset, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(offset), '\n'));
  }

  int line_of_key(const std::string& key) const {
    const std::string quoted = "\"" + key + "\"";
    std::size_t pos = 0;
    while ((pos = text_.find(quoted, pos)) != std::string::npos) {
      std::size_t after = pos + quoted.size();
      while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
      if (after < text_.size() && text_[after] == ':') return line_of(pos);
      pos = after;
    }
    return 1;
  }

  [[noreturn]] void fail_at(int line, const std::string& message) const {
    throw ConfigError(origin_.string() + ":" + std::to_string(line) + ": " + message);
  }
  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    if (from_flags_.count(key)) throw ConfigError("command line: --" + key + ": " + message);
    fail_at(line_of_key(key), message);
  }

  const fs::path& origin() const { return origin_; }

 private:
  const std::string& text_;
  fs::path origin_;
  std::set<std::string> from_flags_;
};

double parse_bound(const json& v, double missing, const Reader& r, const std::string& key) {
  if (v.is_null()) return missing;
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "+inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
  }
  r.fail(key, "'" + key + "' entries must be numbers, null, \"inf\" or \"-inf\"");
}

synlik::Vector parse_vector(const json& v, const Reader& r, const std::string& key) {
  if (!v.is_array() || v.empty()) r.fail(key, "'" + key + "' must be a non-empty array of numbers");
  synlik::Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) r.fail(key, "'" + key + "' must be a non-empty array of numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

synlik::Matrix parse_matrix(const json& v, const Reader& r, const std::string& key) {
  if (!v.is_array() || v.empty() || !v[0].is_array()) {
    r.fail(key, "'" + key + "' must be an array of equal-length numeric rows");
  }
  const std::size_t cols = v[0].size();
  synlik::Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      r.fail(key, "'" + key + "' must be an array of equal-length numeric rows");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) r.fail(key, "'" + key + "' must contain only numbers");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i][j].get<double>();
    }
  }
  return out;
}

synlik::BoundsMatrix parse_bounds(const json& v, const Reader& r, const std::string& key) {
  if (!v.is_array() || v.empty()) r.fail(key, "'" + key + "' must be an array of [lower, upper] pairs");
  synlik::BoundsMatrix out(static_cast<Eigen::Index>(v.size()), 2);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != 2) r.fail(key, "'" + key + "' must be an array of [lower, upper] pairs");
    const auto row = static_cast<Eigen::Index>(i);
    out(row, 0) = parse_bound(v[i][0], -std::numeric_limits<double>::infinity(), r, key);
    out(row, 1) = parse_bound(v[i][1], std::numeric_limits<double>::infinity(), r, key);
    if (!(out(row, 0) < out(row, 1))) {
      r.fail(key, "'" + key + "' row " + std::to_string(i + 1) + " needs lower < upper");
    }
  }
  return out;
}

template <typename Int>
Int parse_int(const json& v, Int min_value, const Reader& r, const std::string& key) {
  if (!v.is_number_integer()) r.fail(key, "'" + key + "' must be an integer");
  const auto value = v.get<long long>();
  if (value < static_cast<long long>(min_value)) {
    r.fail(key, "'" + key + "' must be at least " + std::to_string(min_value));
  }
  return static_cast<Int>(value);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path candidate(p);
  return candidate.is_absolute() ? candidate : base / candidate;
}

json json_bound(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return v;
}

json json_vector(const synlik::Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json json_matrix(const synlik::Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json json_bounds(const synlik::BoundsMatrix& b) {
  json out = json::array();
  for (Eigen::Index i = 0; i < b.rows(); ++i) out.push_back({json_bound(b(i, 0)), json_bound(b(i, 1))});
  return out;
}

}  // namespace

void config_fail(const RunConfig& cfg, const std::string& key, const std::string& message) {
  const auto it = cfg.key_lines.find(key);
  if (it != cfg.key_lines.end() && it->second == 0) throw ConfigError("command line: --" + key + ": " + message);
  const int line = it == cfg.key_lines.end() ? 1 : it->second;
  throw ConfigError(cfg.source.string() + ":" + std::to_string(line) + ": " + message);
}

std::vector<double> expand_candidates(const json& spec) {
  if (spec.is_array()) {
    std::vector<double> out;
    for (const auto& v : spec) {
      if (!v.is_number()) throw ConfigError("penalty candidates must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  if (spec.is_object() && spec.contains("log_linspace")) {
    const auto& a = spec.at("log_linspace");
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() || !a[2].is_number_integer() ||
        a[2].get<int>() < 1) {
      throw ConfigError("log_linspace needs [from, to, count] with integer count >= 1");
    }
    const double from = a[0].get<double>();
    const double to = a[1].get<double>();
    const int count = a[2].get<int>();
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double t = count == 1 ? from : from + (to - from) * k / (count - 1);
      out[static_cast<std::size_t>(k)] = std::exp(t);
    }
    return out;
  }
  throw ConfigError("penalty candidates must be an array or {\"log_linspace\": [from, to, count]}");
}

RunConfig load_config(const std::string& source, ConfigPurpose purpose, const Overrides& overrides) {
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && source[first] == '{') {
    return parse_config(source, fs::current_path() / "<inline>", purpose, overrides);
  }
  const fs::path path(source);
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ":1: cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path, purpose, overrides);
}

RunConfig parse_config(const std::string& text, const fs::path& origin, ConfigPurpose purpose,
                       const Overrides& overrides) {
  std::set<std::string> from_flags;
  if (overrides.model) from_flags.insert("model");
  if (overrides.method) from_flags.insert("method");
  if (overrides.shrinkage) from_flags.insert("shrinkage");
  if (overrides.penalty) from_flags.insert("penalty");
  if (overrides.n) from_flags.insert("n");
  if (overrides.iterations) from_flags.insert("M");
  if (overrides.workers) from_flags.insert("workers");
  const Reader r(text, origin, from_flags);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    r.fail_at(r.line_of(e.byte == 0 ? 0 : e.byte - 1), std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) r.fail_at(1, "config must be a JSON object");
  if (overrides.model) doc["model"] = *overrides.model;
  if (overrides.method) doc["method"] = *overrides.method;
  if (overrides.shrinkage) doc["shrinkage"] = *overrides.shrinkage;
  if (overrides.penalty) doc["penalty"] = *overrides.penalty;
  if (overrides.n) doc["n"] = *overrides.n;
  if (overrides.iterations) doc["M"] = *overrides.iterations;
  if (overrides.workers) doc["workers"] = *overrides.workers;
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.count(key)) r.fail(key, "unknown key '" + key + "'");
  }

  const fs::path base = origin.has_parent_path() ? origin.parent_path() : fs::path(".");
  RunConfig cfg;
  cfg.source = origin;
  for (const auto& [key, value] : doc.items()) {
    cfg.key_lines[key] = from_flags.count(key) ? 0 : r.line_of_key(key);
  }

  // Model.
  if (!doc.contains("model") || !doc["model"].is_string()) {
    r.fail("model", "'model' must be one of \"ma2\", \"gaussian-toy\" or \"external\"");
  }
  cfg.model_name = doc["model"].get<std::string>();
  if (cfg.model_name != "ma2" && cfg.model_name != "gaussian-toy" && cfg.model_name != "external") {
    r.fail("model", "unknown model '" + cfg.model_name + "' (expected ma2, gaussian-toy or external)");
  }
  if (doc.contains("external") != (cfg.model_name == "external")) {
    r.fail(doc.contains("external") ? "external" : "model",
           "an 'external' block is required exactly when model is \"external\"");
  }
  if (cfg.model_name == "external") {
    const auto& ext = doc["external"];
    if (!ext.is_object() || !ext.contains("command") || !ext["command"].is_array() || ext["command"].empty()) {
      r.fail("external", "'external' needs a non-empty 'command' array");
    }
    ExternalSimulatorSpec spec;
    for (const auto& part : ext["command"]) {
      if (!part.is_string()) r.fail("command", "'command' entries must be strings");
      spec.command.push_back(part.get<std::string>());
    }
    if (spec.command[0].find('/') != std::string::npos) {
      const fs::path exe = resolve(base, spec.command[0]);
      if (!fs::exists(exe)) r.fail("command", "simulator executable not found: " + exe.string());
      spec.command[0] = exe.string();
    }
    for (std::size_t i = 1; i < spec.command.size(); ++i) {
      // Arguments naming files next to the config are resolved like other paths.
      const fs::path candidate = resolve(base, spec.command[i]);
      if (!fs::path(spec.command[i]).is_absolute() && fs::exists(candidate) &&
          fs::is_regular_file(candidate)) {
        spec.command[i] = candidate.string();
      }
    }
    if (ext.contains("timeout_ms")) {
      spec.timeout = std::chrono::milliseconds(parse_int<long>(ext["timeout_ms"], 1, r, "timeout_ms"));
    }
    for (const auto& [key, value] : ext.items()) {
      if (key != "command" && key != "timeout_ms") r.fail(key, "unknown key '" + key + "' in 'external'");
    }
    cfg.external = spec;
    if (!doc.contains("theta0")) r.fail("model", "external models need 'theta0'");
  }
  if (doc.contains("model_args")) {
    if (!doc["model_args"].is_object()) r.fail("model_args", "'model_args' must be an object");
    cfg.model_args = doc["model_args"];
  }
  if (doc.contains("theta0")) cfg.theta0 = parse_vector(doc["theta0"], r, "theta0");
  if (doc.contains("prior")) {
    if (cfg.model_name != "external") r.fail("prior", "'prior' applies to external models only");
    const auto& pr = doc["prior"];
    if (!pr.is_object() || !pr.contains("type") || !pr["type"].is_string()) {
      r.fail("prior", "'prior' needs a 'type' of flat, uniform or normal");
    }
    PriorSpec prior;
    const auto type = pr["type"].get<std::string>();
    if (type == "flat") {
      prior.kind = PriorKind::Flat;
    } else if (type == "uniform") {
      prior.kind = PriorKind::Uniform;
      if (!pr.contains("bounds")) r.fail("prior", "uniform prior needs 'bounds'");
      prior.bounds = parse_bounds(pr["bounds"], r, "bounds");
    } else if (type == "normal") {
      prior.kind = PriorKind::Normal;
      if (!pr.contains("mean") || !pr.contains("sd")) r.fail("prior", "normal prior needs 'mean' and 'sd'");
      prior.mean = parse_vector(pr["mean"], r, "mean");
      prior.sd = parse_vector(pr["sd"], r, "sd");
      if (prior.mean.size() != prior.sd.size() || (prior.sd.array() <= 0.0).any()) {
        r.fail("prior", "normal prior needs matching 'mean'/'sd' lengths and positive sds");
      }
    } else {
      r.fail("prior", "unknown prior type '" + type + "'");
    }
    cfg.prior = prior;
  }
  if (doc.contains("param_names")) {
    if (!doc["param_names"].is_array()) r.fail("param_names", "'param_names' must be an array of strings");
    for (const auto& name : doc["param_names"]) {
      if (!name.is_string()) r.fail("param_names", "'param_names' must be an array of strings");
      cfg.param_names.push_back(name.get<std::string>());
    }
  }

  // Observed data.
  if (doc.contains("y") && doc.contains("ssy")) r.fail("ssy", "give only one of 'y' (raw data) or 'ssy' (observed summary)");
  if (!doc.contains("y") && !doc.contains("ssy") && cfg.model_name != "ma2") {
    r.fail("model", "one of 'y' (raw data) or 'ssy' (observed summary) is required");
  }
  if (cfg.model_name == "external" && doc.contains("y")) {
    r.fail("y", "external models take an observed summary 'ssy', not raw data");
  }
  for (const char* key : {"y", "ssy"}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_string()) r.fail(key, std::string("'") + key + "' must be a file path");
    const fs::path p = resolve(base, doc[key].get<std::string>());
    if (!fs::exists(p)) r.fail(key, "file not found: " + p.string());
    (std::string(key) == "y" ? cfg.y_path : cfg.ssy_path) = p;
  }

  // Sampler and estimator.
  if (purpose == ConfigPurpose::Run) {
    if (!doc.contains("n")) r.fail_at(1, "missing required key 'n'");
    if (!doc.contains("M")) r.fail_at(1, "missing required key 'M'");
  }
  if (doc.contains("n")) cfg.n = parse_int<int>(doc["n"], 2, r, "n");
  if (doc.contains("M")) cfg.iterations = parse_int<long>(doc["M"], 0, r, "M");
  if (doc.contains("method")) {
    if (!doc["method"].is_string()) r.fail("method", "'method' must be BSL, uBSL or semiBSL");
    try {
      cfg.method = synlik::parse_estimator_kind(doc["method"].get<std::string>());
    } catch (const synlik::DomainError& e) {
      r.fail("method", e.what());
    }
  }
  if (doc.contains("shrinkage")) {
    if (!doc["shrinkage"].is_string()) r.fail("shrinkage", "'shrinkage' must be none, glasso or Warton");
    try {
      cfg.shrinkage.kind = synlik::parse_shrinkage_kind(doc["shrinkage"].get<std::string>());
    } catch (const synlik::DomainError& e) {
      r.fail("shrinkage", e.what());
    }
  }
  if (doc.contains("penalty")) {
    if (!doc["penalty"].is_number()) r.fail("penalty", "'penalty' must be a number");
    cfg.shrinkage.penalty = doc["penalty"].get<double>();
  }
  if (purpose == ConfigPurpose::Run && cfg.shrinkage.kind != synlik::ShrinkageKind::None &&
      !doc.contains("penalty")) {
    r.fail("shrinkage", "'penalty' is required when shrinkage is used");
  }
  if (doc.contains("use_rank_correlation")) {
    if (!doc["use_rank_correlation"].is_boolean()) r.fail("use_rank_correlation", "'use_rank_correlation' must be a boolean");
    cfg.use_rank_correlation = doc["use_rank_correlation"].get<bool>();
  }
  if (purpose == ConfigPurpose::Run) {
    try {
      synlik::SyntheticLikelihoodConfig{cfg.method, cfg.shrinkage, cfg.use_rank_correlation}.validate();
    } catch (const synlik::DomainError& e) {
      r.fail(doc.contains("penalty") ? "penalty" : "method", e.what());
    }
  }
  if (doc.contains("logit_bounds")) cfg.logit_bounds = parse_bounds(doc["logit_bounds"], r, "logit_bounds");
  if (doc.contains("cov_rand_walk")) {
    const auto& c = doc["cov_rand_walk"];
    if (c.is_string()) {
      const fs::path p = resolve(base, c.get<std::string>());
      std::ifstream in(p);
      if (!in) r.fail("cov_rand_walk", "file not found: " + p.string());
      json loaded;
      try {
        loaded = json::parse(in);
      } catch (const json::parse_error& e) {
        r.fail("cov_rand_walk", "invalid JSON in " + p.string() + ": " + e.what());
      }
      cfg.cov_rand_walk = parse_matrix(loaded, r, "cov_rand_walk");
    } else {
      cfg.cov_rand_walk = parse_matrix(c, r, "cov_rand_walk");
    }
  } else if (cfg.model_name == "ma2") {
    cfg.cov_rand_walk = synlik::models::ma2_default_proposal_cov();
  } else if (purpose == ConfigPurpose::Run) {
    r.fail_at(1, "missing required key 'cov_rand_walk'");
  }
  if (doc.contains("master_seed")) cfg.master_seed = parse_int<std::uint64_t>(doc["master_seed"], 0, r, "master_seed");
  if (const char* env = std::getenv("SL_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ConfigError("SL_SEED must be a non-negative integer, got '" + std::string(env) + "'");
    cfg.master_seed = value;
  }
  if (doc.contains("workers")) cfg.workers = parse_int<int>(doc["workers"], 1, r, "workers");
  if (doc.contains("burn_in")) cfg.burn_in = parse_int<long>(doc["burn_in"], 0, r, "burn_in");
  if (doc.contains("thin")) cfg.thin = parse_int<long>(doc["thin"], 1, r, "thin");
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) r.fail("output_dir", "'output_dir' must be a path");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  } else {
    // Outputs land relative to the working directory, like the --output-dir flag.
  }
  if (doc.contains("verbose")) {
    if (!doc["verbose"].is_boolean()) r.fail("verbose", "'verbose' must be a boolean");
    cfg.verbose = doc["verbose"].get<bool>();
  }

  // Penalty selection.
  if (doc.contains("n_values")) {
    if (!doc["n_values"].is_array() || doc["n_values"].empty()) r.fail("n_values", "'n_values' must be a non-empty array");
    for (const auto& v : doc["n_values"]) cfg.n_values.push_back(parse_int<int>(v, 3, r, "n_values"));
  }
  if (doc.contains("penalty_candidates")) {
    const auto& pc = doc["penalty_candidates"];
    if (!pc.is_array()) r.fail("penalty_candidates", "'penalty_candidates' must be an array with one entry per n");
    for (const auto& entry : pc) {
      try {
        cfg.penalty_candidates.push_back(expand_candidates(entry));
      } catch (const ConfigError& e) {
        r.fail("penalty_candidates", e.what());
      }
    }
  }
  if (doc.contains("penalty_theta")) cfg.penalty_theta = parse_vector(doc["penalty_theta"], r, "penalty_theta");
  if (doc.contains("M_repeats")) cfg.penalty_repeats = parse_int<int>(doc["M_repeats"], 2, r, "M_repeats");
  if (doc.contains("sigma_target")) {
    if (!doc["sigma_target"].is_number() || !(doc["sigma_target"].get<double>() > 0.0)) {
      r.fail("sigma_target", "'sigma_target' must be a positive number");
    }
    cfg.sigma_target = doc["sigma_target"].get<double>();
  }
  if (purpose == ConfigPurpose::SelectPenalty) {
    if (cfg.n_values.empty()) r.fail_at(1, "missing required key 'n_values'");
    if (cfg.penalty_candidates.size() != cfg.n_values.size()) {
      r.fail(doc.contains("penalty_candidates") ? "penalty_candidates" : "n_values",
             "'penalty_candidates' needs one entry per element of 'n_values'");
    }
    if (cfg.method == synlik::EstimatorKind::Unbiased) r.fail("method", "penalty selection supports BSL and semiBSL only");
    if (cfg.shrinkage.kind == synlik::ShrinkageKind::None) {
      r.fail(doc.contains("shrinkage") ? "shrinkage" : "model", "penalty selection needs shrinkage glasso or Warton");
    }
    for (const auto& list : cfg.penalty_candidates) {
      for (double c : list) {
        try {
          synlik::ShrinkageSpec{cfg.shrinkage.kind, c}.validate();
        } catch (const synlik::DomainError& e) {
          r.fail("penalty_candidates", e.what());
        }
      }
    }
  }

  if (overrides.seed) cfg.master_seed = *overrides.seed;
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
  if (overrides.verbose) cfg.verbose = true;
  return cfg;
}

json RunConfig::to_json() const {
  json out;
  out["model"] = model_name;
  if (external) {
    out["external"] = {{"command", external->command}, {"timeout_ms", external->timeout.count()}};
  }
  out["model_args"] = model_args;
  out["theta0"] = theta0 ? json_vector(*theta0) : json(nullptr);
  if (prior) {
    json p;
    switch (prior->kind) {
      case PriorKind::Flat: p["type"] = "flat"; break;
      case PriorKind::Uniform: p["type"] = "uniform"; p["bounds"] = json_bounds(prior->bounds); break;
      case PriorKind::Normal: p["type"] = "normal"; p["mean"] = json_vector(prior->mean); p["sd"] = json_vector(prior->sd); break;
    }
    out["prior"] = p;
  }
  out["param_names"] = param_names;
  out["y"] = y_path ? json(y_path->string()) : json(nullptr);
  out["ssy"] = ssy_path ? json(ssy_path->string()) : json(nullptr);
  out["n"] = n;
  out["M"] = iterations;
  out["method"] = std::string(synlik::to_string(method));
  out["shrinkage"] = std::string(synlik::to_string(shrinkage.kind));
  out["penalty"] = shrinkage.penalty;
  out["use_rank_correlation"] = use_rank_correlation;
  out["logit_bounds"] = logit_bounds ? json_bounds(*logit_bounds) : json(nullptr);
  out["cov_rand_walk"] = cov_rand_walk ? json_matrix(*cov_rand_walk) : json(nullptr);
  out["master_seed"] = master_seed;
  out["workers"] = workers;
  out["burn_in"] = burn_in;
  out["thin"] = thin;
  out["output_dir"] = output_dir.string();
  out["verbose"] = verbose;
  if (!n_values.empty()) {
    out["n_values"] = n_values;
    out["penalty_candidates"] = penalty_candidates;
    out["penalty_theta"] = penalty_theta ? json_vector(*penalty_theta) : json(nullptr);
    out["M_repeats"] = penalty_repeats;
    out["sigma_target"] = sigma_target;
  }
  return out;
}

}  // namespace sl
