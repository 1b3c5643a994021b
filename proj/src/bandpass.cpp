#include "stationplot/bandpass.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace stationplot {
namespace {

using Complex = std::complex<double>;

void validate_spec(const BandpassSpec& spec, double sample_rate) {
  if (!(sample_rate > 0.0)) {
    throw ValidationError("bandpass: sample_rate must be positive");
  }
  if (spec.filter_order < 1) {
    throw ValidationError("bandpass: filter_order must be >= 1");
  }
  if (!(0.0 < spec.low_cut_hz && spec.low_cut_hz < spec.high_cut_hz &&
        spec.high_cut_hz < sample_rate / 2.0)) {
    throw ValidationError(
        "bandpass: cutoffs must satisfy 0 < low < high < sample_rate/2 (got " +
        std::to_string(spec.low_cut_hz) + ", " + std::to_string(spec.high_cut_hz) +
        " at " + std::to_string(sample_rate) + " Hz)");
  }
}

// Bilinear transform with T = 1: s = 2 (z - 1)/(z + 1)  <=>  z = (2 + s)/(2 - s).
Complex bilinear(Complex s) { return (2.0 + s) / (2.0 - s); }

// Frequency response of one section at e^{i w}.
Complex section_response(const Biquad& q, double w) {
  const Complex e1 = std::polar(1.0, -w);
  const Complex e2 = e1 * e1;
  return (q.b0 + q.b1 * e1 + q.b2 * e2) / (1.0 + q.a1 * e1 + q.a2 * e2);
}

// Applies one section in direct form II transposed with zero initial state.
void run_section(const Biquad& q, Eigen::VectorXd& x) {
  double s1 = 0.0, s2 = 0.0;
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double in = x[t];
    const double out = q.b0 * in + s1;
    s1 = q.b1 * in - q.a1 * out + s2;
    s2 = q.b2 * in - q.a2 * out;
    x[t] = out;
  }
}

void run_cascade(const BandpassFilter& filter, Eigen::VectorXd& x) {
  for (const Biquad& q : filter.sections) {
    run_section(q, x);
  }
}

}  // namespace

BandpassFilter design_bandpass(const BandpassSpec& spec, double sample_rate) {
  validate_spec(spec, sample_rate);
  const int n = spec.filter_order;
  const double pi = std::numbers::pi;

  // Pre-warp the corner frequencies so the bilinear transform lands them
  // exactly on the requested digital frequencies.
  const double wl = 2.0 * std::tan(pi * spec.low_cut_hz / sample_rate);
  const double wh = 2.0 * std::tan(pi * spec.high_cut_hz / sample_rate);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);

  // Each analog prototype pole p maps to two band-pass poles, the roots of
  //   s^2 - (bw p) s + w0^2 = 0.
  // Conjugate prototype poles yield conjugate band-pass poles, so sections
  // built from (pole, conj(pole)) stay real.
  BandpassFilter filter;
  filter.spec = spec;
  filter.sample_rate = sample_rate;
  filter.sections.reserve(static_cast<std::size_t>(n));

  auto bp_poles = [&](Complex p, Complex& s1, Complex& s2) {
    const Complex q = bw * p * 0.5;
    const Complex r = std::sqrt(q * q - w0 * w0);
    s1 = q + r;
    s2 = q - r;
  };

  for (int k = 0; 2 * k < n - 1; ++k) {
    const double theta = pi / 2.0 + pi * (2.0 * k + 1.0) / (2.0 * n);
    Complex s1, s2;
    bp_poles(std::polar(1.0, theta), s1, s2);
    for (Complex z : {bilinear(s1), bilinear(s2)}) {
      // Section poles are z and conj(z).
      filter.sections.push_back(
          {1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
    }
  }
  if (n % 2 == 1) {
    // Real prototype pole at -1; its two band-pass poles are conjugates of
    // each other (or both real), forming one section.
    Complex s1, s2;
    bp_poles(Complex(-1.0, 0.0), s1, s2);
    const Complex z1 = bilinear(s1);
    const Complex z2 = bilinear(s2);
    filter.sections.push_back({1.0, 0.0, -1.0, -(z1 + z2).real(), (z1 * z2).real()});
  }

  for (const Biquad& q : filter.sections) {
    // |a2| is the squared pole radius; equality with 1 means a pole on the
    // unit circle and an unstable cascade.
    if (!(std::abs(q.a2) < 1.0 && std::isfinite(q.a1))) {
      throw NumericError("bandpass: unstable section (check cutoffs vs rate)");
    }
  }

  // Normalize to unit gain at the band center.
  const double wc = 2.0 * std::atan(w0 / 2.0);
  Complex h(1.0, 0.0);
  for (const Biquad& q : filter.sections) {
    h *= section_response(q, wc);
  }
  const double mag = std::abs(h);
  if (!(mag > 0.0) || !std::isfinite(mag)) {
    throw NumericError("bandpass: degenerate center-frequency gain");
  }
  const double scale = std::pow(1.0 / mag, 1.0 / static_cast<double>(n));
  for (Biquad& q : filter.sections) {
    q.b0 *= scale;
    q.b1 *= scale;
    q.b2 *= scale;
  }
  return filter;
}

Eigen::VectorXd apply_bandpass(const Eigen::VectorXd& x, const BandpassFilter& filter) {
  if (x.size() == 0) {
    throw ValidationError("apply_bandpass: empty input");
  }
  if (!filter.spec.zero_phase) {
    Eigen::VectorXd y = x;
    run_cascade(filter, y);
    return y;
  }

  // Odd-reflect padding keeps the signal continuous in value and slope at
  // the seams, so the filter transient decays inside the padding.
  const Eigen::Index n = x.size();
  Eigen::Index pad = 3 * static_cast<Eigen::Index>(filter.spec.filter_order);
  pad = std::min(pad, n - 1);
  Eigen::VectorXd ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }
  ext.segment(pad, n) = x;

  run_cascade(filter, ext);
  ext.reverseInPlace();
  run_cascade(filter, ext);
  ext.reverseInPlace();
  return ext.segment(pad, n);
}

Signal bandpass(const Signal& signal, const BandpassSpec& spec) {
  const BandpassFilter filter = design_bandpass(spec, signal.sample_rate);
  Signal out = signal;
  out.samples = apply_bandpass(signal.samples, filter);
  return out;
}

}  // namespace stationplot
