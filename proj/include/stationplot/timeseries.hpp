#pragma once

#include <Eigen/Dense>

#include "stationplot/types.hpp"

namespace stationplot {

enum class DetrendMode { None, Mean, Linear };

// Fitted deterministic trend, so that input = output + intercept + slope * i.
struct DetrendModel {
  DetrendMode mode = DetrendMode::None;
  double intercept = 0.0;
  double slope = 0.0;  // per sample index; 0 in mean mode
};

struct DetrendResult {
  Eigen::VectorXd residual;
  DetrendModel model;
};

// Least-squares removal of a constant (Mean) or straight line (Linear) over
// the sample index. Linear mode needs at least two samples.
template <typename Derived>
DetrendResult detrend(const Eigen::DenseBase<Derived>& x, DetrendMode mode) {
  const Eigen::Index n = x.size();
  DetrendResult out;
  out.model.mode = mode;
  switch (mode) {
    case DetrendMode::None:
      out.residual = x.derived().template cast<double>();
      return out;
    case DetrendMode::Mean: {
      if (n < 1) throw ValidationError("detrend: empty signal");
      const double mu = x.derived().template cast<double>().mean();
      out.model.intercept = mu;
      out.residual = x.derived().template cast<double>().array() - mu;
      return out;
    }
    case DetrendMode::Linear: {
      if (n < 2) throw ValidationError("detrend: linear mode needs >= 2 samples");
      const Eigen::VectorXd y = x.derived().template cast<double>();
      const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, double(n - 1));
      const double tbar = t.mean();
      const double ybar = y.mean();
      const double stt = (t.array() - tbar).square().sum();
      const double sty = ((t.array() - tbar) * (y.array() - ybar)).sum();
      const double slope = sty / stt;
      const double intercept = ybar - slope * tbar;
      out.model.slope = slope;
      out.model.intercept = intercept;
      out.residual = y.array() - intercept - slope * t.array();
      return out;
    }
  }
  throw ValidationError("detrend: unknown mode");
}

inline DetrendResult detrend(const Signal& s, DetrendMode mode) {
  return detrend(s.samples, mode);
}

// Order-D successive differencing by the first-difference recurrence,
// y[i] = x[i+1] - x[i], applied D times. Output index i corresponds to input
// time i + D (latest-sample anchoring). Order 0 is the identity.
template <typename Derived>
Eigen::VectorXd difference(const Eigen::DenseBase<Derived>& x, int order) {
  if (order < 0) throw ValidationError("difference: order must be >= 0");
  if (x.size() <= order)
    throw ValidationError("difference: signal length " + std::to_string(x.size()) +
                          " must exceed order " + std::to_string(order));
  Eigen::VectorXd cur = x.derived().template cast<double>();
  for (int d = 0; d < order; ++d)
    cur = (cur.tail(cur.size() - 1) - cur.head(cur.size() - 1)).eval();
  return cur;
}

inline Eigen::VectorXd difference(const Signal& s, int order) {
  return difference(s.samples, order);
}

}  // namespace stationplot
