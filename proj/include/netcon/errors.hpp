#pragma once

#include <stdexcept>
#include <string>

namespace netcon {

// Base for every rejection this library raises. One subtype per contract so
// callers (and tests) can tell exactly which precondition fired.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct DimensionOverflow : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct InvalidGraph : Error { using Error::Error; };
struct DisconnectedGraph : Error { using Error::Error; };
struct ModelError : Error { using Error::Error; };
struct NoOracleEvaluator : Error { using Error::Error; };
struct NoUniqueFixedPoint : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };
// A check whose hypotheses the model does not satisfy (e.g. classical
// step-size rules on heterogeneous steps).
struct NotApplicable : Error { using Error::Error; };

}  // namespace netcon
