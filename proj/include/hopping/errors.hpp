#pragma once

#include <stdexcept>
#include <string>

namespace hop {

/// An iterative kernel failed to converge, or produced a non-finite value.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request was refused because it would exceed a configured resource cap.
class ResourceCapExceeded : public std::runtime_error {
 public:
  ResourceCapExceeded(const std::string& what, double required)
      : std::runtime_error(what), required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

/// Malformed input value (sign string, option, parameter out of range).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A checkpoint file could not be parsed or does not match the run.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hop
