#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omicsprep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (CSV or JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration record (SynthConfig, SimGrid, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A transform precondition failed. When raised from a pipeline the index
/// of the failing step is attached.
class TransformError : public Error {
 public:
  using Error::Error;
  TransformError(std::size_t step_index, const std::string& what)
      : Error("step " + std::to_string(step_index) + ": " + what),
        step_index_(step_index),
        has_step_(true) {}

  bool has_step() const noexcept { return has_step_; }
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_ = 0;
  bool has_step_ = false;
};

class DesignError : public Error {
 public:
  using Error::Error;
};

/// Model cannot be fit (single group, inestimable effect, too few samples).
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace omicsprep
