#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eegdep {

// Bad arguments or violated preconditions are reported as std::invalid_argument.
// The classes below cover failures that depend on the data rather than the call.

/// Input is valid in shape but carries no usable information (constant, all zero).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An estimator could not produce a result from otherwise valid input.
class EstimationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical integration diverged.
class IntegrationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative trainer hit its iteration cap.
class TrainingFailed : public std::runtime_error {
 public:
  TrainingFailed(const std::string& what, std::size_t iterations)
      : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

}  // namespace eegdep
