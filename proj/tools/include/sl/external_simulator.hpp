#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sl/config.hpp"
#include "synlik/types.hpp"

namespace sl {

inline constexpr const char* kSimProtocol = "sl-sim/1";

/// One child process speaking sl-sim/1 over its stdin/stdout.
///
/// The constructor starts the child and reads its handshake; failures there
/// throw synlik::InitializationError. Request failures (timeout, child exit,
/// malformed reply, wrong length) throw synlik::Error and leave the child
/// unusable.
class ExternalSimulator {
 public:
  explicit ExternalSimulator(const ExternalSimulatorSpec& spec);
  ~ExternalSimulator();

  ExternalSimulator(const ExternalSimulator&) = delete;
  ExternalSimulator& operator=(const ExternalSimulator&) = delete;

  int summary_dim() const { return d_; }
  int param_dim() const { return p_; }
  bool healthy() const { return healthy_; }

  synlik::SummaryVector simulate(const synlik::ParamVector& theta, std::uint64_t seed);

 private:
  std::string read_line(std::chrono::steady_clock::time_point deadline);
  void write_all(const std::string& data);
  [[noreturn]] void fail(const std::string& message, const std::string& payload = {});
  void terminate();

  std::string name_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  int d_ = 0;
  int p_ = 0;
  bool healthy_ = true;
};

/// Fixed set of children, one per worker. A request checks out an idle child
/// for its whole round trip, so no child ever serves two requests at once.
class ExternalSimulatorPool {
 public:
  ExternalSimulatorPool(const ExternalSimulatorSpec& spec, int workers);

  int summary_dim() const { return d_; }
  int param_dim() const { return p_; }
  std::uint64_t calls() const { return calls_.load(); }

  synlik::SummaryVector simulate(const synlik::ParamVector& theta, std::uint64_t seed);

 private:
  std::vector<std::unique_ptr<ExternalSimulator>> children_;
  std::vector<ExternalSimulator*> idle_;
  std::mutex mutex_;
  std::condition_variable available_;
  std::atomic<std::uint64_t> calls_{0};
  int d_ = 0;
  int p_ = 0;
};

}  // namespace sl
