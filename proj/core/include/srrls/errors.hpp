#pragma once

#include <stdexcept>
#include <string>

namespace srrls {

/// A parameter lies outside its mathematical domain (M = 0, delta <= 0, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The recursion produced a non-finite or degenerate quantity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration, channel files or output paths are unusable.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace srrls
