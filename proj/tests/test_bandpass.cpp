#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "stationplot/bandpass.hpp"

using namespace stationplot;

namespace {

constexpr double kPi = std::numbers::pi;

// Cascade frequency response evaluated straight from the realized biquad
// coefficients at digital frequency `omega` (radians per sample).
double cascade_magnitude(const BandpassFilter& filter, double omega) {
  const std::complex<double> z1 = std::polar(1.0, -omega);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h(1.0, 0.0);
  for (const Biquad& q : filter.sections) {
    h *= (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
  }
  return std::abs(h);
}

// Closed-form Butterworth band-pass magnitude after the bilinear transform
// with pre-warped corners:
//   |H| = 1 / sqrt(1 + ((wa^2 - w0^2) / (bw * wa))^(2 n)),  wa = 2 tan(omega/2).
double analytic_magnitude(const BandpassSpec& spec, double sample_rate, double f_hz) {
  const double wl = 2.0 * std::tan(kPi * spec.low_cut_hz / sample_rate);
  const double wh = 2.0 * std::tan(kPi * spec.high_cut_hz / sample_rate);
  const double bw = wh - wl;
  const double w0s = wl * wh;
  const double wa = 2.0 * std::tan(kPi * f_hz / sample_rate);
  const double x = (wa * wa - w0s) / (bw * wa);
  return 1.0 / std::sqrt(1.0 + std::pow(x * x, spec.filter_order));
}

Eigen::VectorXd sine(double f_hz, double sample_rate, Eigen::Index n) {
  Eigen::VectorXd x(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    x[t] = std::sin(2.0 * kPi * f_hz * double(t) / sample_rate);
  }
  return x;
}

double rms_amplitude(const Eigen::VectorXd& y, Eigen::Index begin, Eigen::Index end) {
  const auto seg = y.segment(begin, end - begin);
  return std::sqrt(2.0 * seg.squaredNorm() / double(seg.size()));
}

}  // namespace

TEST_CASE("realized cascade matches the analytic Butterworth magnitude") {
  const double rate = 173.61;
  for (int order : {1, 2, 3, 4, 5, 8}) {
    BandpassSpec spec;
    spec.filter_order = order;
    const BandpassFilter filter = design_bandpass(spec, rate);
    REQUIRE(filter.sections.size() == size_t(order));

    for (int i = 0; i <= 50; ++i) {
      // Log-spaced sweep from deep stop band to near Nyquist.
      const double f = 0.05 * std::pow(80.0 / 0.05, double(i) / 50.0);
      const double want = analytic_magnitude(spec, rate, f);
      const double got = cascade_magnitude(filter, 2.0 * kPi * f / rate);
      CHECK(std::abs(got - want) <= 1e-9 * (1.0 + want));
    }
  }
}

TEST_CASE("half-power at the corners, unit gain at the band center") {
  BandpassSpec spec;  // 0.53 - 40 Hz, order 4
  const double rate = 173.61;
  const BandpassFilter filter = design_bandpass(spec, rate);

  const double g_low = cascade_magnitude(filter, 2.0 * kPi * spec.low_cut_hz / rate);
  const double g_high = cascade_magnitude(filter, 2.0 * kPi * spec.high_cut_hz / rate);
  CHECK(g_low == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(g_high == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

  const double wl = 2.0 * std::tan(kPi * spec.low_cut_hz / rate);
  const double wh = 2.0 * std::tan(kPi * spec.high_cut_hz / rate);
  const double wc = 2.0 * std::atan(std::sqrt(wl * wh) / 2.0);
  CHECK(cascade_magnitude(filter, wc) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a constant input is rejected") {
  const BandpassFilter filter = design_bandpass(BandpassSpec{}, 173.61);
  const Eigen::VectorXd y =
      apply_bandpass(Eigen::VectorXd::Constant(4096, 5.0), filter);
  REQUIRE(y.size() == 4096);
  CHECK(y.segment(1024, 2048).cwiseAbs().maxCoeff() < 0.25);
}

TEST_CASE("a mid-band sinusoid passes with unit amplitude and no lag") {
  const double rate = 173.61;
  const BandpassFilter filter = design_bandpass(BandpassSpec{}, rate);
  const Eigen::VectorXd x = sine(10.0, rate, 4096);
  const Eigen::VectorXd y = apply_bandpass(x, filter);

  const double amp = rms_amplitude(y, 1024, 3072);
  CHECK(amp == doctest::Approx(1.0).epsilon(0.05));

  // Zero-phase filtering leaves the waveform time-aligned: the lag that
  // maximizes correlation with the input is 0.
  double best = -1.0;
  int best_lag = -99;
  for (int lag = -20; lag <= 20; ++lag) {
    double corr = 0.0;
    for (Eigen::Index t = 1024; t < 3072; ++t) corr += y[t] * x[t + lag];
    if (corr > best) {
      best = corr;
      best_lag = lag;
    }
  }
  CHECK(best_lag == 0);
}

TEST_CASE("measured attenuation follows |H| once and |H|^2 zero-phase") {
  const double rate = 173.61;
  const double f = 45.0;  // just above the 40 Hz corner
  BandpassSpec once;
  once.zero_phase = false;
  const BandpassFilter single = design_bandpass(once, rate);
  const Eigen::VectorXd x = sine(f, rate, 8192);

  const double gain = analytic_magnitude(once, rate, f);
  const double measured_once = rms_amplitude(apply_bandpass(x, single), 4096, 8192);
  CHECK(measured_once == doctest::Approx(gain).epsilon(0.02));

  BandpassSpec twice = once;
  twice.zero_phase = true;
  const BandpassFilter both = design_bandpass(twice, rate);
  const double measured_twice = rms_amplitude(apply_bandpass(x, both), 2048, 6144);
  CHECK(measured_twice == doctest::Approx(gain * gain).epsilon(0.03));
}

TEST_CASE("filtering is linear in the input") {
  const double rate = 173.61;
  const Eigen::VectorXd x1 = sine(3.0, rate, 2048);
  const Eigen::VectorXd x2 = sine(27.0, rate, 2048);
  for (bool zero_phase : {false, true}) {
    BandpassSpec spec;
    spec.zero_phase = zero_phase;
    const BandpassFilter filter = design_bandpass(spec, rate);
    const Eigen::VectorXd lhs = apply_bandpass(2.5 * x1 - 0.75 * x2, filter);
    const Eigen::VectorXd rhs =
        2.5 * apply_bandpass(x1, filter) - 0.75 * apply_bandpass(x2, filter);
    const double scale = rhs.cwiseAbs().maxCoeff();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + scale));
  }
}

TEST_CASE("short inputs clamp the reflection padding instead of failing") {
  const BandpassFilter filter = design_bandpass(BandpassSpec{}, 173.61);
  const Eigen::VectorXd y = apply_bandpass(sine(10.0, 173.61, 8), filter);
  CHECK(y.size() == 8);
  CHECK(y.allFinite());
}

TEST_CASE("invalid designs and inputs are rejected") {
  BandpassSpec swapped;
  swapped.low_cut_hz = 40.0;
  swapped.high_cut_hz = 0.53;
  CHECK_THROWS_AS(design_bandpass(swapped, 173.61), ValidationError);

  BandpassSpec beyond;
  beyond.high_cut_hz = 100.0;  // above Nyquist at 173.61 Hz
  CHECK_THROWS_AS(design_bandpass(beyond, 173.61), ValidationError);

  BandpassSpec zeroth;
  zeroth.filter_order = 0;
  CHECK_THROWS_AS(design_bandpass(zeroth, 173.61), ValidationError);

  CHECK_THROWS_AS(design_bandpass(BandpassSpec{}, 0.0), ValidationError);
  CHECK_THROWS_AS(design_bandpass(BandpassSpec{}, -100.0), ValidationError);

  const BandpassFilter ok = design_bandpass(BandpassSpec{}, 173.61);
  CHECK_THROWS_AS(apply_bandpass(Eigen::VectorXd(), ok), ValidationError);
}

TEST_CASE("the Signal wrapper preserves metadata") {
  Signal in;
  in.samples = sine(10.0, 173.61, 1024);
  in.sample_rate = 173.61;
  in.label = "E";
  in.source_id = "rec_001.txt";
  const Signal out = bandpass(in, BandpassSpec{});
  CHECK(out.sample_rate == in.sample_rate);
  CHECK(out.label == "E");
  CHECK(out.source_id == "rec_001.txt");
  CHECK(out.samples.size() == in.samples.size());
}
