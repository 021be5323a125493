#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace yaf {

/** Base class for every error thrown by this library. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Violated construction invariant (grid ordering, node count, dimension, ...). */
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/** A field failed a positivity or finiteness requirement. Carries the first bad node. */
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, std::size_t node, double value)
      : Error(what), node_(node), value_(value) {}
  std::size_t node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t node_ = 0;
  double value_ = 0.0;
};

/** Two objects that must live on the same grid do not. */
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/** A mathematical hypothesis required by an operation does not hold for the input. */
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/** A time step could not be completed (Newton stagnation, positivity loss, CFL breach). */
class StepError : public Error {
 public:
  StepError(const std::string& what, double time, double last_residual)
      : Error(what), time_(time), last_residual_(last_residual) {}
  double time() const noexcept { return time_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  double time_ = 0.0;
  double last_residual_ = 0.0;
};

/** Configuration rejected; collects every validation message, not just the first. */
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> messages)
      : Error(join(messages)), messages_(std::move(messages)) {}
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  static std::string join(const std::vector<std::string>& msgs) {
    std::string out = "configuration invalid:";
    for (const auto& m : msgs) {
      out += "\n  - ";
      out += m;
    }
    return out;
  }
  std::vector<std::string> messages_;
};

/** Checkpoint file unreadable, truncated, or written by an incompatible version. */
class CheckpointError : public Error {
 public:
  using Error::Error;
};

/** Filesystem-level failure (create directory, write file, rename). */
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace yaf
