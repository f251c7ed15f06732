#include "eegdep/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "eegdep/errors.hpp"

namespace eegdep {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TimeSeries lorenz(const LorenzParams& p) {
  if (!(p.dt > 0.0)) throw std::invalid_argument("lorenz: dt must be > 0");
  if (p.n == 0) throw std::invalid_argument("lorenz: n must be > 0");
  using State = std::array<double, 3>;
  auto deriv = [&](const State& s) {
    return State{p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
  };
  auto axpy = [](const State& s, const State& k, double h) {
    return State{s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
  };

  State s = p.initial;
  std::vector<double> out;
  out.reserve(p.n);
  const double h = p.dt;
  for (std::size_t step = 0; step < p.transient + p.n; ++step) {
    const State k1 = deriv(s);
    const State k2 = deriv(axpy(s, k1, h / 2));
    const State k3 = deriv(axpy(s, k2, h / 2));
    const State k4 = deriv(axpy(s, k3, h));
    for (int i = 0; i < 3; ++i) s[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2])) {
      throw IntegrationFailed("lorenz: trajectory diverged at step " + std::to_string(step));
    }
    if (step >= p.transient) out.push_back(s[0]);
  }
  return TimeSeries(std::move(out), 1.0 / p.dt, "lorenz-x");
}

namespace {

void normalize_unit(std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size()));
  if (!(sd > 0.0)) return;
  for (double& x : v) x = (x - mean) / sd;
}

std::vector<double> white(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.gaussian();
  return v;
}

std::vector<double> pink(Rng& rng, std::size_t n) {
  std::vector<double> w = white(rng, n);
  if (n < 4) return w;
  Spectrum s = fft(w);
  s.coeffs[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t f = std::min(k, n - k);  // mirrored bin index keeps the output real
    s.coeffs[k] /= std::sqrt(static_cast<double>(f));
  }
  auto z = ifft_complex(s);
  for (std::size_t i = 0; i < n; ++i) w[i] = z[i].real();
  normalize_unit(w);
  return w;
}

// Second-order resonator driven by white noise, unit variance after burn-in.
std::vector<double> resonator(Rng& rng, std::size_t n, double fs, double f0, double bandwidth) {
  const double r = std::exp(-std::numbers::pi * bandwidth / fs);
  const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * f0 / fs);
  const double a2 = -r * r;
  const std::size_t burn = 2000;
  std::vector<double> y(n);
  double y1 = 0.0;
  double y2 = 0.0;
  for (std::size_t i = 0; i < burn + n; ++i) {
    const double v = a1 * y1 + a2 * y2 + rng.gaussian();
    y2 = y1;
    y1 = v;
    if (i >= burn) y[i - burn] = v;
  }
  normalize_unit(y);
  return y;
}

}  // namespace

TimeSeries noise(NoiseKind kind, std::size_t n, std::uint64_t seed, double fs) {
  if (n == 0) throw std::invalid_argument("noise: n must be > 0");
  Rng rng(seed);
  auto v = kind == NoiseKind::kWhite ? white(rng, n) : pink(rng, n);
  return TimeSeries(std::move(v), fs, kind == NoiseKind::kWhite ? "white" : "pink");
}

namespace {

constexpr double kBackgroundUv = 10.0;
constexpr double kRhythmLogSlope = 0.3;     // log amplitude ratio per unit z
constexpr double kBandwidthLogSlope = 0.3;  // log bandwidth per unit z (negative direction)
constexpr double kBaseBandwidthHz = 2.0;

void validate(const CohortSpec& spec) {
  if (spec.n_depressed < 1 || spec.n_control < 1) {
    throw std::invalid_argument("synth_cohort: both group sizes must be >= 1");
  }
  if (!(spec.fs > 0.0) || !(spec.duration_s > 0.0)) {
    throw std::invalid_argument("synth_cohort: fs and duration must be positive");
  }
  if (spec.channels.empty()) throw std::invalid_argument("synth_cohort: at least one channel required");
  if (!std::isfinite(spec.effect)) throw std::invalid_argument("synth_cohort: effect must be finite");
}

}  // namespace

Recording synth_subject(const CohortSpec& spec, std::size_t index) {
  validate(spec);
  const std::size_t total = spec.n_depressed + spec.n_control;
  if (index >= total) throw std::out_of_range("synth_subject: index beyond cohort size");
  const auto n = static_cast<std::size_t>(std::llround(spec.fs * spec.duration_s));
  if (n < 16) throw std::invalid_argument("synth_cohort: recording too short");

  Recording rec;
  char id[32];
  std::snprintf(id, sizeof(id), "sub-%03zu", index + 1);
  rec.subject_id = id;
  rec.label = index < spec.n_depressed ? Label::kDepressed : Label::kControl;
  rec.fs = spec.fs;

  const std::uint64_t subject_seed = derive_seed(spec.seed, index);
  Rng subject_rng(subject_seed);
  const double z = subject_rng.gaussian() + (rec.label == Label::kDepressed ? spec.effect : 0.0);
  const double f0 = 10.0 + 0.5 * subject_rng.gaussian();
  const double ratio = std::exp(kRhythmLogSlope * z);
  const double bandwidth = std::max(0.2, kBaseBandwidthHz * std::exp(-kBandwidthLogSlope * z));
  if (!std::isfinite(ratio) || !std::isfinite(bandwidth) || f0 <= 0.5 || f0 >= spec.fs / 2) {
    throw std::invalid_argument("synth_cohort: effect size produces a non-finite generator");
  }

  for (std::size_t c = 0; c < spec.channels.size(); ++c) {
    Rng rng(derive_seed(subject_seed, c + 1));
    const double gain = std::exp(0.1 * rng.gaussian());
    const auto bg = pink(rng, n);
    const auto rhythm = resonator(rng, n, spec.fs, f0, bandwidth);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = gain * kBackgroundUv * (bg[i] + ratio * rhythm[i]);
    for (double x : v) {
      if (!std::isfinite(x)) throw std::invalid_argument("synth_cohort: effect size produces non-finite samples");
    }
    rec.channels.emplace_back(std::move(v), spec.fs, spec.channels[c]);
  }
  return rec;
}

std::vector<Recording> synth_cohort(const CohortSpec& spec) {
  validate(spec);
  std::vector<Recording> out;
  for (std::size_t i = 0; i < spec.n_depressed + spec.n_control; ++i) out.push_back(synth_subject(spec, i));
  return out;
}

}  // namespace eegdep
