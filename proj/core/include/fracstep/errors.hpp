#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracstep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Breakpoints or orders do not form a valid piecewise-constant schedule.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// A special function or quadrature could not reach its accuracy target.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// The elliptic operator fails the coercivity requirement c_0 < a_min (pi/L)^2.
class CoercivityError : public Error {
 public:
  using Error::Error;
};

/// Data violate the declared blow-up bound of the source derivative.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite value or a linear solve failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate value inside the per-mode recursion.
class ModeError : public NumericError {
 public:
  ModeError(const std::string& what, std::size_t mode, std::size_t segment)
      : NumericError(what + " (mode " + std::to_string(mode) + ", segment " +
                     std::to_string(segment) + ")"),
        mode_(mode),
        segment_(segment) {}

  [[nodiscard]] std::size_t mode() const noexcept { return mode_; }
  [[nodiscard]] std::size_t segment() const noexcept { return segment_; }

 private:
  std::size_t mode_;
  std::size_t segment_;
};

}  // namespace fracstep
