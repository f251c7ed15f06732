#include "eegdep/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eegdep {

TimeSeries::TimeSeries(std::vector<double> samples, double fs, std::string label)
    : samples_(std::move(samples)), fs_(fs), label_(std::move(label)) {
  if (!(fs_ > 0.0) || !std::isfinite(fs_)) {
    throw std::invalid_argument("TimeSeries: sampling rate must be positive and finite");
  }
  if (samples_.empty()) throw std::invalid_argument("TimeSeries: samples must be nonempty");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw std::invalid_argument("TimeSeries: samples must be finite");
  }
}

WindowKind parse_window(const std::string& name) {
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "hann") return WindowKind::kHann;
  if (name == "rect") return WindowKind::kRect;
  throw std::invalid_argument("unknown window '" + name + "' (expected hamming|hann|rect)");
}

std::string window_name(WindowKind w) {
  switch (w) {
    case WindowKind::kHamming: return "hamming";
    case WindowKind::kHann: return "hann";
    case WindowKind::kRect: return "rect";
  }
  return "rect";
}

namespace detail {
namespace {

constexpr std::size_t kMaxDirectRadix = 61;

std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> f;
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

struct MixedRadix {
  std::size_t n_top;
  std::vector<cplx> twiddle;  // exp(sign * 2 pi i j / n_top)
  std::vector<std::size_t> factors;

  MixedRadix(std::size_t n, int sign) : n_top(n), twiddle(n), factors(prime_factors(n)) {
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = base * static_cast<double>(j);
      twiddle[j] = cplx(std::cos(a), std::sin(a));
    }
  }

  // Decimation in time. `level` indexes into factors; `step` = n_top / n.
  void run(const cplx* in, std::size_t istride, cplx* out, std::size_t n, std::size_t level,
           std::size_t step, std::vector<cplx>& scratch) const {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    const std::size_t p = factors[level];
    const std::size_t m = n / p;
    for (std::size_t q = 0; q < p; ++q) {
      run(in + q * istride, istride * p, out + q * m, m, level + 1, step * p, scratch);
    }
    if (p == 2) {
      for (std::size_t k = 0; k < m; ++k) {
        const cplx a = out[k];
        const cplx b = out[k + m] * twiddle[k * step];
        out[k] = a + b;
        out[k + m] = a - b;
      }
      return;
    }
    cplx* t = scratch.data();
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t q = 0; q < p; ++q) {
        t[q] = out[q * m + k] * twiddle[((q * k) % n) * step];
      }
      for (std::size_t s = 0; s < p; ++s) {
        cplx acc = t[0];
        for (std::size_t q = 1; q < p; ++q) {
          acc += t[q] * twiddle[((q * s * m) % n) * step];
        }
        out[k + s * m] = acc;
      }
    }
  }

  void apply(std::vector<cplx>& data) const {
    std::vector<cplx> out(data.size());
    std::size_t widest = 2;
    for (std::size_t f : factors) widest = std::max(widest, f);
    std::vector<cplx> scratch(widest);
    run(data.data(), 1, out.data(), data.size(), 0, 1, scratch);
    data.swap(out);
  }
};

void bluestein(std::vector<cplx>& data, int sign) {
  const std::size_t n = data.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  // chirp[k] = exp(sign * i pi k^2 / n); k^2 reduced mod 2n keeps the angle small.
  std::vector<cplx> chirp(n);
  const unsigned long long two_n = 2ULL * n;
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned long long kk = (static_cast<unsigned long long>(k) * k) % two_n;
    const double a = sign * std::numbers::pi * static_cast<double>(kk) / static_cast<double>(n);
    chirp[k] = cplx(std::cos(a), std::sin(a));
  }

  std::vector<cplx> a(m, cplx(0.0, 0.0));
  std::vector<cplx> b(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) a[k] = data[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    b[m - k] = b[k];
  }

  const MixedRadix fwd(m, -1);
  const MixedRadix inv(m, +1);
  fwd.apply(a);
  fwd.apply(b);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  inv.apply(a);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) data[k] = a[k] * scale * chirp[k];
}

}  // namespace

void dft_inplace(std::vector<cplx>& data, int sign) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  const auto factors = prime_factors(n);
  if (factors.back() > kMaxDirectRadix) {
    bluestein(data, sign);
    return;
  }
  MixedRadix(n, sign).apply(data);
}

}  // namespace detail

Spectrum fft(std::span<const double> x, double fs) {
  if (x.empty()) throw std::invalid_argument("fft: input must be nonempty");
  std::vector<cplx> buf(x.begin(), x.end());
  detail::dft_inplace(buf, -1);
  const double inv_n = 1.0 / static_cast<double>(buf.size());
  for (auto& v : buf) v *= inv_n;
  return Spectrum{std::move(buf), fs, FftConvention::kForwardOneOverN};
}

Spectrum fft(const TimeSeries& x) { return fft(x.samples(), x.fs()); }

std::vector<cplx> ifft_complex(const Spectrum& s) {
  if (s.coeffs.empty()) throw std::invalid_argument("ifft: spectrum must be nonempty");
  std::vector<cplx> buf = s.coeffs;
  detail::dft_inplace(buf, +1);
  return buf;
}

TimeSeries ifft(const Spectrum& s) {
  const auto z = ifft_complex(s);
  std::vector<double> re(z.size());
  std::transform(z.begin(), z.end(), re.begin(), [](const cplx& c) { return c.real(); });
  return TimeSeries(std::move(re), s.fs);
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  // Periodic (DFT-even) form, as used for spectral estimation.
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n));
    switch (kind) {
      case WindowKind::kHamming: w[i] = 0.54 - 0.46 * c; break;
      case WindowKind::kHann: w[i] = 0.5 - 0.5 * c; break;
      case WindowKind::kRect: break;
    }
  }
  return w;
}

Psd welch_psd(const TimeSeries& x, const WelchConfig& cfg) {
  const std::size_t len = cfg.segment_len;
  if (len < 8) throw std::invalid_argument("welch_psd: segment_len must be >= 8");
  if (len > x.size()) throw std::invalid_argument("welch_psd: segment longer than signal");
  if (!(cfg.overlap >= 0.0 && cfg.overlap < 1.0)) {
    throw std::invalid_argument("welch_psd: overlap must be in [0, 1)");
  }

  const auto overlap = static_cast<std::size_t>(std::floor(cfg.overlap * static_cast<double>(len)));
  const std::size_t hop = std::max<std::size_t>(1, len - overlap);
  const std::vector<double> window = make_window(cfg.window, len);
  double wsum2 = 0.0;
  for (double w : window) wsum2 += w * w;

  const std::size_t nfreq = len / 2 + 1;
  std::vector<double> acc(nfreq, 0.0);
  std::vector<cplx> buf(len);
  std::size_t segments = 0;
  const auto xs = x.samples();
  for (std::size_t start = 0; start + len <= xs.size(); start += hop) {
    double mean = 0.0;
    for (std::size_t i = 0; i < len; ++i) mean += xs[start + i];
    mean /= static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) buf[i] = cplx((xs[start + i] - mean) * window[i], 0.0);
    detail::dft_inplace(buf, -1);
    for (std::size_t k = 0; k < nfreq; ++k) acc[k] += std::norm(buf[k]);
    ++segments;
  }

  const double scale = 1.0 / (x.fs() * wsum2 * static_cast<double>(segments));
  Psd out;
  out.resolution = x.fs() / static_cast<double>(len);
  out.freqs.resize(nfreq);
  out.power.resize(nfreq);
  for (std::size_t k = 0; k < nfreq; ++k) {
    out.freqs[k] = static_cast<double>(k) * out.resolution;
    double p = acc[k] * scale;
    const bool nyquist = (len % 2 == 0) && (k == len / 2);
    if (k != 0 && !nyquist) p *= 2.0;
    out.power[k] = p;
  }
  return out;
}

}  // namespace eegdep
