#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paris {

/// Base class for every error raised by the smoother and its oracles.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A weight vector with no positive mass, or with NaN/infinite entries.
class DegenerateWeights : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or violated precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling did not accept within the allowed number of trials.
/// Usually means the bound c(x') is far from tight.
class RejectionExhausted : public Error {
 public:
  explicit RejectionExhausted(std::size_t trials)
      : Error("backward rejection sampler exhausted " + std::to_string(trials) +
              " trials without acceptance (bound too loose?)"),
        trials_(trials) {}

  std::size_t trials() const noexcept { return trials_; }

 private:
  std::size_t trials_;
};

/// Wraps an error raised while advancing the smoother from step `step`.
class StepError : public Error {
 public:
  StepError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace paris
