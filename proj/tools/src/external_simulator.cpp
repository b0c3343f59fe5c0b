#include "sl/external_simulator.hpp"

#include <csignal>
#include <cerrno>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "synlik/error.hpp"

namespace sl {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string truncate(const std::string& s, std::size_t limit = 400) {
  return s.size() <= limit ? s : s.substr(0, limit) + "...";
}

std::string describe_status(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "stopped";
}

}  // namespace

ExternalSimulator::ExternalSimulator(const ExternalSimulatorSpec& spec)
    : name_(spec.command.empty() ? std::string() : spec.command.front()), timeout_(spec.timeout) {
  if (spec.command.empty()) throw synlik::InitializationError("external simulator: empty command");
  // A child dying between requests must surface as EPIPE, not kill us.
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw synlik::InitializationError("external simulator: pipe failed");
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw synlik::InitializationError("external simulator: pipe failed");
  }

  std::vector<char*> argv;
  for (const auto& arg : spec.command) argv.push_back(const_cast<char*>(arg.c_str()));
  argv.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    throw synlik::InitializationError("external simulator: fork failed");
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execvp(argv[0], argv.data());
    const std::string msg = "sl: cannot execute " + name_ + ": " + std::strerror(errno) + "\n";
    [[maybe_unused]] auto ignored = write(STDERR_FILENO, msg.data(), msg.size());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  std::string line;
  try {
    line = read_line(Clock::now() + timeout_);
  } catch (const synlik::Error& e) {
    throw synlik::InitializationError(std::string("external simulator handshake: ") + e.what());
  }
  json hello;
  try {
    hello = json::parse(line);
  } catch (const json::parse_error&) {
    terminate();
    throw synlik::InitializationError("external simulator handshake is not JSON: " + truncate(line));
  }
  if (!hello.is_object() || hello.value("protocol", json()) != kSimProtocol || !hello.contains("d") ||
      !hello["d"].is_number_integer() || !hello.contains("p") || !hello["p"].is_number_integer() ||
      hello["d"].get<int>() < 1 || hello["p"].get<int>() < 1) {
    terminate();
    throw synlik::InitializationError("external simulator handshake must be {\"protocol\":\"sl-sim/1\",\"d\":<int>,"
                                      "\"p\":<int>}, got: " + truncate(line));
  }
  d_ = hello["d"].get<int>();
  p_ = hello["p"].get<int>();
}

ExternalSimulator::~ExternalSimulator() { terminate(); }

void ExternalSimulator::terminate() {
  healthy_ = false;
  if (to_child_ >= 0) {
    close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
  if (pid_ <= 0) return;
  // Closing stdin asks the child to exit; give it a moment before killing.
  const auto deadline = Clock::now() + std::chrono::milliseconds(500);
  int status = 0;
  while (Clock::now() < deadline) {
    const pid_t r = waitpid(pid_, &status, WNOHANG);
    if (r == pid_ || r < 0) {
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  kill(pid_, SIGKILL);
  waitpid(pid_, &status, 0);
  pid_ = -1;
}

void ExternalSimulator::fail(const std::string& message, const std::string& payload) {
  if (!payload.empty()) spdlog::error("external simulator {}: {}; payload: {}", name_, message, truncate(payload));
  std::string detail = message;
  if (pid_ > 0) {
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      detail += " (child " + describe_status(status) + ")";
      pid_ = -1;
    }
  }
  terminate();
  throw synlik::Error("external simulator " + name_ + ": " + detail);
}

std::string ExternalSimulator::read_line(Clock::time_point deadline) {
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) fail("timed out after " + std::to_string(timeout_.count()) + " ms", buffer_);
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining.count(), 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t got = read(from_child_, chunk, sizeof chunk);
    if (got < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      fail(std::string("read failed: ") + std::strerror(errno));
    }
    if (got == 0) {
      // Give a dying child a moment so its exit status can be reported.
      for (int i = 0; i < 20 && pid_ > 0; ++i) {
        int status = 0;
        if (waitpid(pid_, &status, WNOHANG) == pid_) {
          pid_ = -1;
          fail("child " + describe_status(status) + " before replying", buffer_);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
      fail("child closed its output before replying", buffer_);
    }
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

void ExternalSimulator::write_all(const std::string& data) {
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = write(to_child_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(std::string("write failed: ") + std::strerror(errno), data);
    }
    written += static_cast<std::size_t>(n);
  }
}

synlik::SummaryVector ExternalSimulator::simulate(const synlik::ParamVector& theta, std::uint64_t seed) {
  if (!healthy_) throw synlik::Error("external simulator " + name_ + " is no longer usable");
  if (theta.size() != p_) {
    throw synlik::Error("external simulator expects " + std::to_string(p_) + " parameters, got " +
                        std::to_string(theta.size()));
  }
  const json request = {{"seed", seed}, {"theta", std::vector<double>(theta.data(), theta.data() + theta.size())}};
  write_all(request.dump() + "\n");
  const std::string line = read_line(Clock::now() + timeout_);

  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::parse_error&) {
    fail("malformed reply (not JSON)", line);
  }
  if (!reply.is_object() || !reply.contains("summary") || !reply["summary"].is_array()) {
    fail("malformed reply (expected {\"summary\": [...]})", line);
  }
  const auto& values = reply["summary"];
  if (values.size() != static_cast<std::size_t>(d_)) {
    fail("reply has " + std::to_string(values.size()) + " summary values, expected d = " + std::to_string(d_), line);
  }
  synlik::SummaryVector out(d_);
  for (int j = 0; j < d_; ++j) {
    if (!values[static_cast<std::size_t>(j)].is_number()) fail("malformed reply (non-numeric summary value)", line);
    out(j) = values[static_cast<std::size_t>(j)].get<double>();
  }
  return out;
}

ExternalSimulatorPool::ExternalSimulatorPool(const ExternalSimulatorSpec& spec, int workers) {
  if (workers < 1) throw synlik::DomainError("external simulator pool: workers must be positive");
  for (int w = 0; w < workers; ++w) {
    children_.push_back(std::make_unique<ExternalSimulator>(spec));
    const auto& child = *children_.back();
    if (w == 0) {
      d_ = child.summary_dim();
      p_ = child.param_dim();
    } else if (child.summary_dim() != d_ || child.param_dim() != p_) {
      throw synlik::InitializationError("external simulator children disagree on their handshake dimensions");
    }
    idle_.push_back(children_.back().get());
  }
}

synlik::SummaryVector ExternalSimulatorPool::simulate(const synlik::ParamVector& theta, std::uint64_t seed) {
  ExternalSimulator* child = nullptr;
  {
    std::unique_lock lock(mutex_);
    available_.wait(lock, [&] { return !idle_.empty(); });
    child = idle_.back();
    idle_.pop_back();
  }
  struct Return {
    ExternalSimulatorPool& pool;
    ExternalSimulator* child;
    ~Return() {
      {
        std::lock_guard lock(pool.mutex_);
        pool.idle_.push_back(child);
      }
      pool.available_.notify_one();
    }
  } give_back{*this, child};
  ++calls_;
  return child->simulate(theta, seed);
}

}  // namespace sl
