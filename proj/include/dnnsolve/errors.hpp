#pragma once

#include <stdexcept>
#include <string>

namespace dnnsolve {

/// Requested derivative order exceeds what the jet arithmetic carries (3).
class UnsupportedOrder : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A NaN or Inf showed up in a residual, loss part or gradient block.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed problem definitions, unknown case ids and the like.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dnnsolve
