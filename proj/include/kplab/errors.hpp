#pragma once

#include <stdexcept>
#include <string>

namespace kplab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NonPositiveWeightSum : Error {
  using Error::Error;
};

struct EmptyConfiguration : Error {
  using Error::Error;
};

struct NotAContraction : Error {
  NotAContraction(const std::string& msg, int i_, int j_, double ratio_)
      : Error(msg), i(i_), j(j_), ratio(ratio_) {}
  int i;
  int j;
  double ratio;
};

struct InconsistentCollapse : Error {
  InconsistentCollapse(const std::string& msg, int i_, int j_)
      : Error(msg), i(i_), j(j_) {}
  int i;
  int j;
};

struct BudgetExceeded : Error {
  using Error::Error;
};

struct UnsupportedDimension : Error {
  using Error::Error;
};

struct NonPositiveAlpha : Error {
  using Error::Error;
};

struct NotInRelativeInterior : Error {
  using Error::Error;
};

// Thrown when the half-space system of a monotone extension has no solution.
// Cannot happen when the preconditions hold; treated as an internal bug.
struct InfeasibleSystem : Error {
  using Error::Error;
};

struct BandwidthRequired : Error {
  using Error::Error;
};

struct OperatorNormExceeded : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace kplab
