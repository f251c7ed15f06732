#pragma once

#include <string>

#include "eegdep/signal.hpp"

namespace eegdep {

/// How the "center" of the spectrum is read.
enum class CenterMode { kCentroid, kMedian };

CenterMode parse_center_mode(const std::string& name);
std::string center_mode_name(CenterMode m);

struct SpectralSummary {
  double max_power = 0.0;
  double mean_power = 0.0;
  double center_hz = 0.0;
  bool degenerate = false;  // all-zero band: center set to the band midpoint
};

/// Max, mean and center of the PSD over bins with band_lo <= f <= band_hi.
/// Centroid is sum f P(f) / sum P(f); median is the frequency where the
/// cumulative band power first reaches half.
SpectralSummary spectral_features(const Psd& p, double band_lo = 1.0, double band_hi = 40.0,
                                  CenterMode mode = CenterMode::kCentroid);

}  // namespace eegdep
