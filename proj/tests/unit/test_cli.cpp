#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "sl/commands.hpp"
#include "sl/config.hpp"
#include "sl/external_simulator.hpp"
#include "sl/io.hpp"
#include "sl/model_loader.hpp"
#include "support.hpp"
#include "synlik/error.hpp"
#include "synlik/numerics.hpp"
#include "synlik/simulation.hpp"

namespace sl {
namespace {

namespace fs = std::filesystem;
using synlik::Matrix;
using synlik::ParamVector;
using synlik::Vector;

const fs::path kOrigin = "/tmp/cfg.json";

std::string error_of(const std::string& text, ConfigPurpose purpose = ConfigPurpose::Run,
                     const Overrides& overrides = {}) {
  try {
    parse_config(text, kOrigin, purpose, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("sl-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& content) const {
    std::ofstream(path_ / name) << content;
    return path_ / name;
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

ExternalSimulatorSpec fake(const std::string& mode, int p = 2, int d = 4, long k = 0, long timeout_ms = 5000) {
  return {{FAKE_SIM_PATH, mode, std::to_string(p), std::to_string(d), std::to_string(k)},
          std::chrono::milliseconds(timeout_ms)};
}

// config -------------------------------------------------------------------

TEST(Config, MinimalMa2Run) {
  const auto cfg = parse_config(R"({"model": "ma2", "n": 100, "M": 10})", kOrigin, ConfigPurpose::Run);
  EXPECT_EQ(cfg.model_name, "ma2");
  EXPECT_EQ(cfg.n, 100);
  EXPECT_EQ(cfg.iterations, 10);
  EXPECT_EQ(cfg.method, synlik::EstimatorKind::Standard);
  ASSERT_TRUE(cfg.cov_rand_walk.has_value());
  EXPECT_EQ(cfg.cov_rand_walk->rows(), 2);
}

TEST(Config, ErrorsNameFileAndLine) {
  const std::string text = "{\n  \"model\": \"ma2\",\n  \"n\": 100,\n  \"M\": -5\n}\n";
  const auto message = error_of(text);
  EXPECT_EQ(message.rfind("/tmp/cfg.json:4:", 0), 0u) << message;
  EXPECT_NE(message.find("M"), std::string::npos);
}

TEST(Config, UnknownKeyIsRejectedAtItsLine) {
  const auto message = error_of("{\n  \"model\": \"ma2\",\n  \"n\": 100,\n  \"M\": 5,\n  \"burnin\": 3\n}");
  EXPECT_EQ(message.rfind("/tmp/cfg.json:5:", 0), 0u) << message;
}

TEST(Config, MissingRequiredKeyPointsAtTheTop) {
  const auto message = error_of("{\n  \"model\": \"ma2\",\n  \"M\": 5\n}");
  EXPECT_EQ(message.rfind("/tmp/cfg.json:1:", 0), 0u) << message;
  EXPECT_NE(message.find("'n'"), std::string::npos) << message;
}

TEST(Config, FlagErrorsNameTheFlag) {
  Overrides o;
  o.n = -3;
  const auto message = error_of(R"({"model": "ma2", "n": 100, "M": 10})", ConfigPurpose::Run, o);
  EXPECT_EQ(message.rfind("command line: --n:", 0), 0u) << message;
}

TEST(Config, ShrinkageNeedsPenaltyAndValidRange) {
  EXPECT_NE(error_of(R"({"model": "ma2", "n": 100, "M": 10, "shrinkage": "glasso"})"), "");
  EXPECT_NE(error_of(R"({"model": "ma2", "n": 100, "M": 10, "shrinkage": "Warton", "penalty": 2})"), "");
  EXPECT_EQ(error_of(R"({"model": "ma2", "n": 100, "M": 10, "shrinkage": "Warton", "penalty": 0.5})"), "");
  EXPECT_NE(error_of(R"({"model": "ma2", "n": 100, "M": 10, "method": "uBSL", "shrinkage": "glasso", "penalty": 0.1})"),
            "");
}

TEST(Config, ObservedDataRules) {
  EXPECT_NE(error_of(R"({"model": "ma2", "n": 100, "M": 10, "y": "a.json", "ssy": "b.json"})"), "");
  EXPECT_NE(error_of(R"({"model": "gaussian-toy", "n": 100, "M": 10, "cov_rand_walk": [[1]]})"), "");
  EXPECT_NE(error_of(R"({"model": "external", "n": 100, "M": 10, "theta0": [0],
                         "external": {"command": ["x"]}, "cov_rand_walk": [[1]]})"),
            "");
  EXPECT_NE(error_of(R"({"model": "ma2", "external": {"command": ["x"]}, "n": 100, "M": 10})"), "");
}

TEST(Config, InputPathsAreRelativeToTheConfig) {
  TempDir dir;
  dir.write("obs.json", "[0.8]");
  const auto path = dir.write("run.json", R"({"model": "gaussian-toy", "ssy": "obs.json", "n": 10, "M": 1,
    "cov_rand_walk": [[0.1]], "output_dir": "out"})");
  const auto cfg = load_config(path.string(), ConfigPurpose::Run);
  ASSERT_TRUE(cfg.ssy_path.has_value());
  EXPECT_EQ(*cfg.ssy_path, dir.path() / "obs.json");
  EXPECT_EQ(cfg.output_dir, fs::path("out"));
}

TEST(Config, SeedPrecedence) {
  const std::string text = R"({"model": "ma2", "n": 100, "M": 10, "master_seed": 5})";
  ::unsetenv("SL_SEED");
  EXPECT_EQ(parse_config(text, kOrigin, ConfigPurpose::Run).master_seed, 5u);
  ::setenv("SL_SEED", "7", 1);
  EXPECT_EQ(parse_config(text, kOrigin, ConfigPurpose::Run).master_seed, 7u);
  Overrides o;
  o.seed = 9;
  EXPECT_EQ(parse_config(text, kOrigin, ConfigPurpose::Run, o).master_seed, 9u);
  ::setenv("SL_SEED", "seven", 1);
  EXPECT_THROW(parse_config(text, kOrigin, ConfigPurpose::Run), ConfigError);
  ::unsetenv("SL_SEED");
}

TEST(Config, PenaltySelectionRequirements) {
  const std::string ok = R"({"model": "ma2", "method": "BSL", "shrinkage": "glasso",
    "n_values": [50, 150], "penalty_candidates": [[0.1, 0.2], {"log_linspace": [-4, -0.5, 20]}],
    "penalty_theta": [0.6, 0.2], "M_repeats": 10})";
  const auto cfg = parse_config(ok, kOrigin, ConfigPurpose::SelectPenalty);
  ASSERT_EQ(cfg.penalty_candidates.size(), 2u);
  EXPECT_EQ(cfg.penalty_candidates[1].size(), 20u);
  EXPECT_EQ(cfg.penalty_repeats, 10);
  EXPECT_NE(error_of(R"({"model": "ma2", "shrinkage": "glasso", "penalty_candidates": [[0.1]]})",
                     ConfigPurpose::SelectPenalty),
            "");
  EXPECT_NE(error_of(R"({"model": "ma2", "shrinkage": "glasso", "n_values": [50, 60], "penalty_candidates": [[0.1]]})",
                     ConfigPurpose::SelectPenalty),
            "");
  EXPECT_NE(error_of(R"({"model": "ma2", "n_values": [50], "penalty_candidates": [[0.1]]})",
                     ConfigPurpose::SelectPenalty),
            "");
}

TEST(Config, ExpandCandidates) {
  const auto grid = expand_candidates(nlohmann::json::parse(R"({"log_linspace": [-3, 0.5, 20]})"));
  ASSERT_EQ(grid.size(), 20u);
  EXPECT_NEAR(grid.front(), std::exp(-3.0), 1e-15);
  EXPECT_NEAR(grid.back(), std::exp(0.5), 1e-14);
  EXPECT_NEAR(grid[1], std::exp(-3.0 + 3.5 / 19.0), 1e-15);
  EXPECT_EQ(expand_candidates(nlohmann::json::parse("[0.5, 0.25]")), (std::vector<double>{0.5, 0.25}));
}

TEST(Config, InlineSourceAndEchoedJson) {
  const auto cfg = load_config(R"({"model": "ma2", "n": 60, "M": 3, "logit_bounds": [[-2, 2], [-1, "inf"]]})",
                               ConfigPurpose::Run);
  EXPECT_EQ(cfg.source.filename(), "<inline>");
  ASSERT_TRUE(cfg.logit_bounds.has_value());
  EXPECT_TRUE(std::isinf((*cfg.logit_bounds)(1, 1)));
  const auto echoed = cfg.to_json();
  EXPECT_EQ(echoed["n"], 60);
  EXPECT_EQ(echoed["model"], "ma2");
}

// io ----------------------------------------------------------------------

TEST(Io, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(NAN), "NA");
  EXPECT_EQ(format_double(INFINITY), "Inf");
  EXPECT_EQ(format_double(-INFINITY), "-Inf");
  auto rng = synlik::testing::test_stream(80);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<int>(rng.uniform() * 40) - 20);
    ASSERT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Io, CsvRoundTripIsExact) {
  TempDir dir;
  auto rng = synlik::testing::test_stream(81);
  const Matrix values = synlik::testing::random_normal_matrix(rng, 7, 3);
  write_text(dir.path() / "m.csv", matrix_csv({"a", "b", "c"}, values));
  const auto table = read_csv(dir.path() / "m.csv");
  EXPECT_EQ(table.header, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(table.values, values);
}

TEST(Io, CsvErrorsNameTheLine) {
  TempDir dir;
  const auto path = dir.write("bad.csv", "x,y\n1,2\n3,oops\n");
  try {
    read_csv(path);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST(Io, ReadVectorFormats) {
  TempDir dir;
  EXPECT_EQ(read_vector(dir.write("a.json", "[1, 2.5, -3]")), (Vector(3) << 1, 2.5, -3).finished());
  EXPECT_EQ(read_vector(dir.write("b.txt", "1 2.5\n-3,4\n")), (Vector(4) << 1, 2.5, -3, 4).finished());
}

// draws -------------------------------------------------------------------

TEST(Draws, BurnInAndThinningSkipTheStart) {
  Matrix theta(11, 1);
  Vector loglike(11);
  for (int i = 0; i <= 10; ++i) theta(i, 0) = loglike(i) = i;
  const auto d = select_draws(theta, loglike, 3, 2);
  EXPECT_EQ(d.theta.col(0), (Vector(4) << 4, 6, 8, 10).finished());
  EXPECT_EQ(select_draws(theta, loglike, 0, 1).theta.rows(), 10);
  EXPECT_THROW(select_draws(theta, loglike, 10, 1), std::invalid_argument);
  EXPECT_EQ(select_draws(theta.topRows(1), loglike.head(1), 0, 1).theta.rows(), 0);
}

TEST(Draws, StatisticsNullWhenTooShort) {
  Matrix theta(2, 1);
  theta << 0.0, 1.0;
  const auto stats = chain_statistics(select_draws(theta, Vector::Zero(2), 0, 1), {"a"});
  EXPECT_EQ(stats["draws"], 1);
  EXPECT_TRUE(stats["ess"]["a"].is_null());
}

// external simulator ------------------------------------------------------

TEST(External, EchoRoundTrip) {
  ExternalSimulator sim(fake("echo", 2, 4));
  EXPECT_EQ(sim.summary_dim(), 4);
  EXPECT_EQ(sim.param_dim(), 2);
  const auto s = sim.simulate((ParamVector(2) << 0.5, -1.0).finished(), 123);
  EXPECT_EQ(s, (Vector(4) << 0.5, -1.0, 0.0, 0.0).finished());
  EXPECT_TRUE(sim.healthy());
}

TEST(External, WrongLengthReply) {
  ExternalSimulator sim(fake("wrong-d"));
  EXPECT_THROW(sim.simulate(ParamVector::Zero(2), 1), synlik::Error);
  EXPECT_FALSE(sim.healthy());
}

TEST(External, MalformedReply) {
  ExternalSimulator sim(fake("garbage", 2, 4, 1));
  EXPECT_NO_THROW(sim.simulate(ParamVector::Zero(2), 1));
  EXPECT_THROW(sim.simulate(ParamVector::Zero(2), 2), synlik::Error);
}

TEST(External, Timeout) {
  ExternalSimulator sim(fake("hang", 2, 4, 0, 200));
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(sim.simulate(ParamVector::Zero(2), 1), synlik::Error);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(3));
}

TEST(External, BadHandshakeIsAnInitializationError) {
  EXPECT_THROW(ExternalSimulator(fake("handshake")), synlik::InitializationError);
  EXPECT_THROW(ExternalSimulator({{"/nonexistent/simulator"}, std::chrono::milliseconds(1000)}),
               synlik::InitializationError);
}

RunConfig external_config(const ExternalSimulatorSpec& spec, int p) {
  RunConfig cfg;
  cfg.model_name = "external";
  cfg.external = spec;
  cfg.theta0 = ParamVector::Zero(p);
  return cfg;
}

TEST(External, ChildDeathReportsTheReplicate) {
  auto cfg = external_config(fake("die", 1, 3, 4), 1);
  TempDir dir;
  cfg.ssy_path = dir.write("ssy.json", "[0, 0, 0]");
  const auto loaded = load_model(cfg, 1);
  const synlik::SimulationRunner runner(*loaded.model, 1, 1);
  try {
    runner.simulate(ParamVector::Zero(1), 10, 0);
    FAIL();
  } catch (const synlik::SimulationFailure& e) {
    EXPECT_EQ(e.replicate(), 4u);
  }
}

TEST(External, PoolResultsIndependentOfWorkers) {
  TempDir dir;
  auto cfg = external_config(fake("noisy", 2, 5), 2);
  cfg.ssy_path = dir.write("ssy.json", "[0, 0, 0, 0, 0]");
  const auto one = load_model(cfg, 1);
  const auto three = load_model(cfg, 3);
  EXPECT_EQ(one.summary_dim, 5);
  EXPECT_EQ(one.param_names, (std::vector<std::string>{"theta1", "theta2"}));
  const ParamVector theta = (ParamVector(2) << 0.3, -0.7).finished();
  const auto a = synlik::SimulationRunner(*one.model, 11, 1).simulate(theta, 24, 5);
  const auto b = synlik::SimulationRunner(*three.model, 11, 3).simulate(theta, 24, 5);
  EXPECT_EQ(a, b);
  EXPECT_EQ(one.pool->calls(), 24u);
  EXPECT_EQ(three.pool->calls(), 24u);
}

TEST(External, SeedsFitInFiftyThreeBits) {
  synlik::RngStream rng(1, 2);
  for (int i = 0; i < 1000; ++i) ASSERT_LT(external_seed(rng), std::uint64_t{1} << 53);
}

TEST(External, PythonMa2SimulatorMatchesTheory) {
  const ExternalSimulatorSpec spec{{"python3", MA2_SCRIPT_PATH}, std::chrono::milliseconds(10000)};
  ExternalSimulatorPool pool(spec, 1);
  ASSERT_EQ(pool.summary_dim(), 50);
  double lag0 = 0.0, lag1 = 0.0, lag2 = 0.0;
  long c0 = 0, c1 = 0, c2 = 0;
  for (std::uint64_t seed = 0; seed < 1500; ++seed) {
    const auto y = pool.simulate((ParamVector(2) << 0.6, 0.2).finished(), seed);
    for (Eigen::Index t = 0; t < y.size(); ++t) {
      lag0 += y(t) * y(t), ++c0;
      if (t >= 1) lag1 += y(t) * y(t - 1), ++c1;
      if (t >= 2) lag2 += y(t) * y(t - 2), ++c2;
    }
  }
  EXPECT_NEAR(lag0 / c0, 1.40, 0.04);
  EXPECT_NEAR(lag1 / c1, 0.72, 0.04);
  EXPECT_NEAR(lag2 / c2, 0.20, 0.04);
}

}  // namespace
}  // namespace sl
