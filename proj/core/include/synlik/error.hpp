#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synlik {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few simulated rows for the requested statistic.
class InsufficientSimulations : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A margin of the simulated summaries has zero spread.
class DegenerateMargin : public Error {
 public:
  using Error::Error;
};

/// Simulator (or summary function) failed for one replicate.
class SimulationFailure : public Error {
 public:
  SimulationFailure(std::size_t replicate, const std::string& what)
      : Error("simulation " + std::to_string(replicate) + " failed: " + what),
        replicate_(replicate) {}

  std::size_t replicate() const noexcept { return replicate_; }

 private:
  std::size_t replicate_;
};

/// The Markov chain could not be started from theta0.
class InitializationError : public Error {
 public:
  using Error::Error;
};

}  // namespace synlik
