#include "eegdep/features_linear.hpp"

#include <algorithm>
#include <stdexcept>

namespace eegdep {

CenterMode parse_center_mode(const std::string& name) {
  if (name == "centroid") return CenterMode::kCentroid;
  if (name == "median") return CenterMode::kMedian;
  throw std::invalid_argument("unknown center mode '" + name + "' (expected centroid|median)");
}

std::string center_mode_name(CenterMode m) {
  return m == CenterMode::kCentroid ? "centroid" : "median";
}

SpectralSummary spectral_features(const Psd& p, double band_lo, double band_hi, CenterMode mode) {
  if (!(band_lo < band_hi)) throw std::invalid_argument("spectral_features: band_lo must be < band_hi");
  if (p.freqs.size() != p.power.size() || p.freqs.empty()) {
    throw std::invalid_argument("spectral_features: malformed PSD");
  }
  if (band_lo < p.freqs.front() || band_hi > p.freqs.back()) {
    throw std::invalid_argument("spectral_features: band outside PSD frequency range");
  }

  std::size_t count = 0;
  double max_p = 0.0;
  double sum_p = 0.0;
  double sum_fp = 0.0;
  for (std::size_t k = 0; k < p.freqs.size(); ++k) {
    const double f = p.freqs[k];
    if (f < band_lo || f > band_hi) continue;
    max_p = count == 0 ? p.power[k] : std::max(max_p, p.power[k]);
    sum_p += p.power[k];
    sum_fp += f * p.power[k];
    ++count;
  }
  if (count == 0) throw std::invalid_argument("spectral_features: no PSD bins inside the band");

  SpectralSummary out;
  out.max_power = max_p;
  out.mean_power = sum_p / static_cast<double>(count);
  if (!(sum_p > 0.0)) {
    out.center_hz = 0.5 * (band_lo + band_hi);
    out.degenerate = true;
    return out;
  }
  if (mode == CenterMode::kCentroid) {
    out.center_hz = sum_fp / sum_p;
    return out;
  }
  double running = 0.0;
  for (std::size_t k = 0; k < p.freqs.size(); ++k) {
    const double f = p.freqs[k];
    if (f < band_lo || f > band_hi) continue;
    running += p.power[k];
    if (running >= 0.5 * sum_p) {
      out.center_hz = f;
      break;
    }
  }
  return out;
}

}  // namespace eegdep
