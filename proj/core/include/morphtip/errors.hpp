#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace morphtip {

enum class ErrorKind {
  InvalidParams,
  OutOfRange,
  Unreachable,
  Penetration,
  Unsupported,
  Degenerate,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the geometric model.
class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Mechanism jam or an angle outside the operating range. `step` is set when
/// the failure happened inside a multi-step sweep or trajectory.
class OutOfRangeError : public ModelError {
 public:
  explicit OutOfRangeError(const std::string& message,
                           std::optional<std::size_t> step = std::nullopt)
      : ModelError(ErrorKind::OutOfRange, message), step_(step) {}

  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::optional<std::size_t> step_;
};

/// Requested output angle lies outside [lo, hi], the attainable interval.
class UnreachableError : public ModelError {
 public:
  UnreachableError(const std::string& message, double lo, double hi)
      : ModelError(ErrorKind::Unreachable, message), lo_(lo), hi_(hi) {}

  double attainable_lo() const noexcept { return lo_; }
  double attainable_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class PenetrationError : public ModelError {
 public:
  PenetrationError(const std::string& message, Eigen::Vector2d witness, double depth)
      : ModelError(ErrorKind::Penetration, message), witness_(witness), depth_(depth) {}

  const Eigen::Vector2d& witness() const noexcept { return witness_; }
  double depth() const noexcept { return depth_; }

 private:
  Eigen::Vector2d witness_;
  double depth_;
};

}  // namespace morphtip
