#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace eegdep {

using cplx = std::complex<double>;

/// One channel of sampled signal. Construction validates fs > 0 and that
/// samples are nonempty and finite; the object is immutable afterwards.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> samples, double fs, std::string label = {});

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }
  double fs() const noexcept { return fs_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  double fs_;
  std::string label_;
};

/// Forward transform carries the 1/N factor; the inverse is an unscaled sum.
enum class FftConvention { kForwardOneOverN };

struct Spectrum {
  std::vector<cplx> coeffs;
  double fs = 1.0;
  FftConvention convention = FftConvention::kForwardOneOverN;

  std::size_t size() const noexcept { return coeffs.size(); }
};

struct Psd {
  std::vector<double> freqs;  // Hz, ascending from 0
  std::vector<double> power;  // density, units^2 / Hz
  double resolution = 0.0;    // Hz per bin
};

enum class WindowKind { kHamming, kHann, kRect };

struct WelchConfig {
  std::size_t segment_len = 500;
  double overlap = 0.5;
  WindowKind window = WindowKind::kHamming;
};

WindowKind parse_window(const std::string& name);
std::string window_name(WindowKind w);

/// X(k) = (1/N) sum_n x(n) exp(-j 2 pi k n / N). Any length; no zero padding.
Spectrum fft(const TimeSeries& x);
Spectrum fft(std::span<const double> x, double fs = 1.0);

/// x(n) = sum_k X(k) exp(+j 2 pi k n / N). Returns the complex result;
/// for Hermitian input the imaginary parts vanish to rounding.
std::vector<cplx> ifft_complex(const Spectrum& s);

/// Real part of ifft_complex wrapped as a TimeSeries at s.fs.
TimeSeries ifft(const Spectrum& s);

/// Welch PSD: mean-removed, windowed segments, one-sided density scaling
/// (power / (fs * sum w^2)), bins spaced fs / segment_len.
Psd welch_psd(const TimeSeries& x, const WelchConfig& cfg = {});

std::vector<double> make_window(WindowKind kind, std::size_t n);

namespace detail {
/// Unnormalized in-place DFT. sign = -1 forward, +1 inverse.
/// Mixed radix for smooth lengths, Bluestein for large prime factors.
void dft_inplace(std::vector<cplx>& data, int sign);
}  // namespace detail

}  // namespace eegdep
