#pragma once

#include <stdexcept>
#include <string>

namespace nsgal {

/// Input data violates a field invariant (reality symmetry, incompressibility,
/// mode layout).
class DataIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numerical configuration: grid too coarse, bad time step, unknown
/// preset, missing key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every sample drawn while estimating an inequality constant was degenerate.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsgal
