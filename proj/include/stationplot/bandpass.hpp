#pragma once

#include <Eigen/Dense>
#include <vector>

#include "stationplot/types.hpp"

namespace stationplot {

// Band-pass design parameters. `filter_order` is the Butterworth prototype
// order: the realized cascade has that many biquad sections (twice as many
// poles).
struct BandpassSpec {
  double low_cut_hz = 0.53;
  double high_cut_hz = 40.0;
  int filter_order = 4;
  bool zero_phase = true;
};

// One second-order section in direct form II transposed,
//   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

struct BandpassFilter {
  std::vector<Biquad> sections;
  BandpassSpec spec;
  double sample_rate = 0.0;
};

// Butterworth band-pass via the bilinear transform, returned as a cascade of
// second-order sections (numerically robust at low corner frequencies where
// a single high-order polynomial would be ill-conditioned).
BandpassFilter design_bandpass(const BandpassSpec& spec, double sample_rate);

// Runs the cascade over x with zero initial state. In zero-phase mode the
// signal is odd-reflect padded by 3x filter_order on each side, filtered
// forward then backward, and cropped back to the original length.
Eigen::VectorXd apply_bandpass(const Eigen::VectorXd& x, const BandpassFilter& filter);

// Convenience wrapper preserving Signal metadata.
Signal bandpass(const Signal& signal, const BandpassSpec& spec);

}  // namespace stationplot
