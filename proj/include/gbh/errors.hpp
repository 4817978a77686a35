#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gbh {

/// Base class for all library errors; `what()` carries the diagnostic.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
  using Error::Error;
};

/// Parameter validation failure carrying every violated constraint.
struct ValidationError : Error {
  std::vector<std::string> violations;
  explicit ValidationError(std::vector<std::string> v)
      : Error(join(v)), violations(std::move(v)) {}
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid parameters:";
    for (const auto& x : v) s += "\n  - " + x;
    return s;
  }
};

struct TooCoarse : Error {
  using Error::Error;
};
struct ListTooShort : Error {
  using Error::Error;
};
struct DegenerateController : Error {
  using Error::Error;
};
struct DependentTraces : Error {
  using Error::Error;
};
struct GainConditionFailed : Error {
  using Error::Error;
};
struct SolverSingular : Error {
  using Error::Error;
};
struct InsufficientSamples : Error {
  using Error::Error;
};
struct NewtonDiverged : Error {
  using Error::Error;
};
struct UnstableStep : Error {
  using Error::Error;
};
struct Overflow : Error {
  using Error::Error;
};
struct DegenerateSeries : Error {
  using Error::Error;
};

}  // namespace gbh
