#ifndef FRVN_ERROR_HPP_
#define FRVN_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frvn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied an input that violates a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel failed (eigensolver breakdown, overflow, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised by the time-domain solver when the state blows up.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(std::size_t step, double magnitude)
      : NumericalError("solution diverged at step " + std::to_string(step) +
                       " (max |u| = " + std::to_string(magnitude) + ")"),
        step_(step),
        magnitude_(magnitude) {}

  std::size_t step() const { return step_; }
  double magnitude() const { return magnitude_; }

 private:
  std::size_t step_;
  double magnitude_;
};

}  // namespace frvn

#endif  // FRVN_ERROR_HPP_
