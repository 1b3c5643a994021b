#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace stationplot {

// Error hierarchy. The CLI maps these onto exit codes:
// ValidationError -> 1, DataError -> 2, NumericError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, bad configuration, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: non-convergence, degenerate geometry.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A labeled, uniformly sampled real-valued series.
struct Signal {
  Eigen::VectorXd samples;
  double sample_rate = 0.0;  // Hz
  std::string label;
  std::string source_id;
};

// Non-fatal diagnostics (odd record lengths, excluded runs, ...) are pushed
// here when the caller supplies a sink; a null sink discards them.
using WarningSink = std::vector<std::string>;

inline void warn(WarningSink* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

}  // namespace stationplot
