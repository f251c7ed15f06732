#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "eegdep/signal.hpp"

namespace eegdep {

enum class FilterKind { kHighpass, kLowpass, kBandpass };

struct FilterSpec {
  FilterKind kind = FilterKind::kBandpass;
  double low_hz = 1.0;    // highpass cutoff (highpass, bandpass)
  double high_hz = 40.0;  // lowpass cutoff (lowpass, bandpass)
  int order = 4;
  bool zero_phase = true;
};

/// One biquad in transposed direct form II: b0 b1 b2 / 1 a1 a2.
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 3> a{1.0, 0.0, 0.0};
};

/// Butterworth design by bilinear transform, returned as second-order
/// sections. A bandpass is the highpass cascade followed by the lowpass
/// cascade, each of the given order.
std::vector<Biquad> butterworth_sections(const FilterSpec& spec, double fs);

/// Magnitude response |H(e^{j 2 pi f / fs})| of a single (one-pass) cascade.
double sections_magnitude(const std::vector<Biquad>& sos, double f_hz, double fs);

/// Applies the filter described by `spec`. Zero-phase mode runs the cascade
/// forward then backward over an odd-reflected extension with steady-state
/// initial conditions, so length, fs and timing are preserved.
TimeSeries bandlimit(const TimeSeries& x, const FilterSpec& spec);

// ---------------------------------------------------------------------------
// Discrete wavelet transform (orthogonal Daubechies family, periodized).

enum class Wavelet { kHaar, kDb2, kDb4 };

Wavelet parse_wavelet(const std::string& name);
std::string wavelet_name(Wavelet w);

/// Reconstruction lowpass (scaling) filter, sum = sqrt(2).
const std::vector<double>& scaling_filter(Wavelet w);

struct WaveletCoeffs {
  std::vector<double> approximation;        // deepest level
  std::vector<std::vector<double>> details; // details[0] is level 1 (finest)
  std::vector<std::size_t> lengths;         // signal length entering each level
  Wavelet wavelet = Wavelet::kDb4;
  int levels = 0;
  double fs = 1.0;
};

WaveletCoeffs dwt_decompose(const TimeSeries& x, Wavelet wavelet, int levels);
TimeSeries dwt_reconstruct(const WaveletCoeffs& c);

// ---------------------------------------------------------------------------
// Ocular artifact suppression.

struct OcularConfig {
  Wavelet wavelet = Wavelet::kDb4;
  int levels = 5;
  // Random-walk process and measurement variances for the approximation band.
  // Non-positive values select the data-driven defaults
  // q = 0.01 * var(approx), R = var(approx).
  double process_var = 0.0;
  double measurement_var = 0.0;
};

/// Scalar random-walk Kalman filter over a coefficient sequence; returns the
/// filtered state estimates.
std::vector<double> kalman_random_walk(const std::vector<double>& z, double q, double r);

/// Decomposes to cfg.levels, tracks the slow drift in the deepest
/// approximation band with a scalar Kalman filter, subtracts that estimate
/// and reconstructs. This is an approximation of a DWT + Kalman ocular
/// correction; the tracker is a plain random-walk model.
TimeSeries remove_ocular(const TimeSeries& x, const OcularConfig& cfg = {});

}  // namespace eegdep
