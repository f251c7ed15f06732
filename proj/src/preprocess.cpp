#include "eegdep/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace eegdep {
namespace {

enum class Band { kLow, kHigh };

void append_butterworth(std::vector<Biquad>& out, Band band, int order, double cutoff, double fs) {
  const double pi = std::numbers::pi;
  const double two_fs = 2.0 * fs;
  const double warped = two_fs * std::tan(pi * cutoff / fs);
  auto to_z = [&](std::complex<double> s) { return (two_fs + s) / (two_fs - s); };
  auto analog = [&](std::complex<double> proto) {
    return band == Band::kLow ? warped * proto : warped / proto;
  };

  for (int k = 0; k < order / 2; ++k) {
    const std::complex<double> proto =
        std::polar(1.0, pi * static_cast<double>(2 * k + order + 1) / static_cast<double>(2 * order));
    const std::complex<double> z = to_z(analog(proto));
    Biquad s;
    s.a = {1.0, -2.0 * z.real(), std::norm(z)};
    if (band == Band::kLow) {
      const double g = (1.0 + s.a[1] + s.a[2]) / 4.0;  // unit gain at DC
      s.b = {g, 2.0 * g, g};
    } else {
      const double g = (1.0 - s.a[1] + s.a[2]) / 4.0;  // unit gain at Nyquist
      s.b = {g, -2.0 * g, g};
    }
    out.push_back(s);
  }
  if (order % 2 == 1) {
    const double z = to_z(analog(std::complex<double>(-1.0, 0.0))).real();
    Biquad s;
    s.a = {1.0, -z, 0.0};
    if (band == Band::kLow) {
      const double g = (1.0 - z) / 2.0;
      s.b = {g, g, 0.0};
    } else {
      const double g = (1.0 + z) / 2.0;
      s.b = {g, -g, 0.0};
    }
    out.push_back(s);
  }
}

// Steady-state state of each section for a unit step input.
std::vector<std::array<double, 2>> sections_zi(const std::vector<Biquad>& sos) {
  std::vector<std::array<double, 2>> zi(sos.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < sos.size(); ++i) {
    const auto& [b, a] = sos[i];
    const double r0 = b[1] - a[1] * b[0];
    const double r1 = b[2] - a[2] * b[0];
    const double det = 1.0 + a[1] + a[2];
    zi[i] = {scale * (r0 + r1) / det, scale * ((1.0 + a[1]) * r1 - a[2] * r0) / det};
    scale *= (b[0] + b[1] + b[2]) / (a[0] + a[1] + a[2]);
  }
  return zi;
}

void run_sections(const std::vector<Biquad>& sos, std::vector<std::array<double, 2>> state,
                  std::vector<double>& x) {
  for (std::size_t s = 0; s < sos.size(); ++s) {
    const auto& [b, a] = sos[s];
    double z0 = state[s][0];
    double z1 = state[s][1];
    for (double& v : x) {
      const double in = v;
      const double y = b[0] * in + z0;
      z0 = b[1] * in - a[1] * y + z1;
      z1 = b[2] * in - a[2] * y;
      v = y;
    }
  }
}

void validate(const FilterSpec& spec, double fs) {
  if (spec.order < 1) throw std::invalid_argument("bandlimit: order must be >= 1");
  const double nyquist = fs / 2.0;
  auto check = [&](double c) {
    if (!(c > 0.0 && c < nyquist)) {
      throw std::invalid_argument("bandlimit: cutoff " + std::to_string(c) +
                                  " Hz must lie strictly between 0 and Nyquist " +
                                  std::to_string(nyquist) + " Hz");
    }
  };
  if (spec.kind != FilterKind::kLowpass) check(spec.low_hz);
  if (spec.kind != FilterKind::kHighpass) check(spec.high_hz);
  if (spec.kind == FilterKind::kBandpass && !(spec.low_hz < spec.high_hz)) {
    throw std::invalid_argument("bandlimit: bandpass requires low < high");
  }
}

}  // namespace

std::vector<Biquad> butterworth_sections(const FilterSpec& spec, double fs) {
  validate(spec, fs);
  std::vector<Biquad> sos;
  if (spec.kind != FilterKind::kLowpass) append_butterworth(sos, Band::kHigh, spec.order, spec.low_hz, fs);
  if (spec.kind != FilterKind::kHighpass) append_butterworth(sos, Band::kLow, spec.order, spec.high_hz, fs);
  return sos;
}

double sections_magnitude(const std::vector<Biquad>& sos, double f_hz, double fs) {
  const double w = 2.0 * std::numbers::pi * f_hz / fs;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  double mag = 1.0;
  for (const auto& [b, a] : sos) {
    mag *= std::abs(b[0] + b[1] * z1 + b[2] * z2) / std::abs(a[0] + a[1] * z1 + a[2] * z2);
  }
  return mag;
}

TimeSeries bandlimit(const TimeSeries& x, const FilterSpec& spec) {
  const auto sos = butterworth_sections(spec, x.fs());
  const auto zi = sections_zi(sos);
  const auto& src = x.values();
  const std::size_t n = src.size();

  if (!spec.zero_phase) {
    std::vector<double> y = src;
    run_sections(sos, std::vector<std::array<double, 2>>(sos.size(), {0.0, 0.0}), y);
    return TimeSeries(std::move(y), x.fs(), x.label());
  }

  const std::size_t pad = std::min<std::size_t>(3 * (2 * sos.size() + 1), n > 0 ? n - 1 : 0);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * src.front() - src[i]);
  ext.insert(ext.end(), src.begin(), src.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * src.back() - src[n - 1 - i]);

  auto scaled = [&](double v) {
    auto s = zi;
    for (auto& z : s) {
      z[0] *= v;
      z[1] *= v;
    }
    return s;
  };

  run_sections(sos, scaled(ext.front()), ext);
  std::reverse(ext.begin(), ext.end());
  run_sections(sos, scaled(ext.front()), ext);
  std::reverse(ext.begin(), ext.end());

  std::vector<double> y(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                        ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
  return TimeSeries(std::move(y), x.fs(), x.label());
}

// ---------------------------------------------------------------------------

Wavelet parse_wavelet(const std::string& name) {
  if (name == "haar" || name == "db1") return Wavelet::kHaar;
  if (name == "db2") return Wavelet::kDb2;
  if (name == "db4") return Wavelet::kDb4;
  throw std::invalid_argument("unknown wavelet '" + name + "' (expected haar|db2|db4)");
}

std::string wavelet_name(Wavelet w) {
  switch (w) {
    case Wavelet::kHaar: return "haar";
    case Wavelet::kDb2: return "db2";
    case Wavelet::kDb4: return "db4";
  }
  return "haar";
}

const std::vector<double>& scaling_filter(Wavelet w) {
  static const std::vector<double> haar = {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  static const std::vector<double> db2 = [] {
    const double s3 = std::sqrt(3.0);
    const double d = 4.0 * std::numbers::sqrt2;
    return std::vector<double>{(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
  }();
  static const std::vector<double> db4 = {
      0.23037781330885523,  0.7148465705525415,   0.6308807679295904,  -0.02798376941698385,
      -0.18703481171888114, 0.030841381835986965, 0.032883011666982945, -0.010597401784997278};
  switch (w) {
    case Wavelet::kHaar: return haar;
    case Wavelet::kDb2: return db2;
    case Wavelet::kDb4: return db4;
  }
  return haar;
}

namespace {

std::vector<double> wavelet_filter(const std::vector<double>& h) {
  const std::size_t len = h.size();
  std::vector<double> g(len);
  for (std::size_t j = 0; j < len; ++j) g[j] = ((j % 2) ? -1.0 : 1.0) * h[len - 1 - j];
  return g;
}

}  // namespace

WaveletCoeffs dwt_decompose(const TimeSeries& x, Wavelet wavelet, int levels) {
  if (levels < 1) throw std::invalid_argument("dwt_decompose: levels must be >= 1");
  if (levels >= 63 || (std::size_t{1} << levels) > x.size()) {
    throw std::invalid_argument("dwt_decompose: 2^levels exceeds signal length");
  }
  const auto& h = scaling_filter(wavelet);
  const auto g = wavelet_filter(h);

  WaveletCoeffs out;
  out.wavelet = wavelet;
  out.levels = levels;
  out.fs = x.fs();
  std::vector<double> cur = x.values();
  for (int level = 0; level < levels; ++level) {
    out.lengths.push_back(cur.size());
    // Odd lengths are extended by repeating the last sample.
    if (cur.size() % 2) cur.push_back(cur.back());
    const std::size_t n = cur.size();
    const std::size_t half = n / 2;
    std::vector<double> a(half, 0.0);
    std::vector<double> d(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      double sa = 0.0;
      double sd = 0.0;
      for (std::size_t j = 0; j < h.size(); ++j) {
        const double v = cur[(2 * k + j) % n];
        sa += h[j] * v;
        sd += g[j] * v;
      }
      a[k] = sa;
      d[k] = sd;
    }
    out.details.push_back(std::move(d));
    cur = std::move(a);
  }
  out.approximation = std::move(cur);
  return out;
}

TimeSeries dwt_reconstruct(const WaveletCoeffs& c) {
  const auto levels = static_cast<std::size_t>(c.levels);
  if (c.levels < 1 || c.details.size() != levels || c.lengths.size() != levels) {
    throw std::invalid_argument("dwt_reconstruct: level count does not match coefficient lists");
  }
  for (std::size_t i = 0; i < levels; ++i) {
    const std::size_t expect = (c.lengths[i] + 1) / 2;
    if (c.details[i].size() != expect) {
      throw std::invalid_argument("dwt_reconstruct: inconsistent detail length at level " +
                                  std::to_string(i + 1));
    }
    if (i + 1 < levels && c.lengths[i + 1] != expect) {
      throw std::invalid_argument("dwt_reconstruct: inconsistent level lengths");
    }
  }
  if (c.approximation.size() != (c.lengths.back() + 1) / 2) {
    throw std::invalid_argument("dwt_reconstruct: inconsistent approximation length");
  }

  const auto& h = scaling_filter(c.wavelet);
  const auto g = wavelet_filter(h);
  std::vector<double> cur = c.approximation;
  for (std::size_t level = levels; level-- > 0;) {
    const auto& d = c.details[level];
    const std::size_t half = d.size();
    const std::size_t n = 2 * half;
    std::vector<double> rec(n, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      for (std::size_t j = 0; j < h.size(); ++j) {
        rec[(2 * k + j) % n] += h[j] * cur[k] + g[j] * d[k];
      }
    }
    rec.resize(c.lengths[level]);
    cur = std::move(rec);
  }
  return TimeSeries(std::move(cur), c.fs);
}

std::vector<double> kalman_random_walk(const std::vector<double>& z, double q, double r) {
  std::vector<double> est(z.size());
  if (z.empty()) return est;
  double state = z.front();
  double p = r;
  for (std::size_t k = 0; k < z.size(); ++k) {
    p += q;
    const double denom = p + r;
    const double gain = denom > 0.0 ? p / denom : 1.0;
    state += gain * (z[k] - state);
    p *= (1.0 - gain);
    est[k] = state;
  }
  return est;
}

TimeSeries remove_ocular(const TimeSeries& x, const OcularConfig& cfg) {
  if (cfg.levels < 1) throw std::invalid_argument("remove_ocular: levels must be >= 1");
  if (cfg.levels >= 63 || (std::size_t{1} << cfg.levels) > x.size()) {
    throw std::invalid_argument("remove_ocular: signal shorter than 2^levels");
  }
  auto coeffs = dwt_decompose(x, cfg.wavelet, cfg.levels);
  auto& approx = coeffs.approximation;

  double mean = 0.0;
  for (double v : approx) mean += v;
  mean /= static_cast<double>(approx.size());
  double var = 0.0;
  for (double v : approx) var += (v - mean) * (v - mean);
  var /= static_cast<double>(approx.size());

  const double r = cfg.measurement_var > 0.0 ? cfg.measurement_var : var;
  const double q = cfg.process_var > 0.0 ? cfg.process_var : 0.01 * var;
  if (!(r > 0.0) || !(q > 0.0)) return x;  // flat approximation band: nothing to track

  const auto drift = kalman_random_walk(approx, q, r);
  for (std::size_t i = 0; i < approx.size(); ++i) approx[i] -= drift[i];
  auto rec = dwt_reconstruct(coeffs);
  return TimeSeries(rec.values(), x.fs(), x.label());
}

}  // namespace eegdep
