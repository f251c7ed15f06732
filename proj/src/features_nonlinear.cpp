#include "eegdep/features_nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eegdep/errors.hpp"

namespace eegdep {

EmbeddedSeries::EmbeddedSeries(std::vector<double> data, std::size_t m, std::size_t tau,
                               std::size_t count, std::size_t stride)
    : data_(std::move(data)), m_(m), tau_(tau), count_(count), stride_(stride) {
  if (m_ == 0 || data_.size() % m_ != 0) {
    throw std::invalid_argument("EmbeddedSeries: data size must be a multiple of m");
  }
  if (stride_ == 0) throw std::invalid_argument("EmbeddedSeries: stride must be >= 1");
}

std::size_t select_delay(const TimeSeries& x, std::size_t m) {
  const std::size_t n = x.size();
  if (n < 100) throw std::invalid_argument("select_delay: need at least 100 samples");
  if (m < 1) throw std::invalid_argument("select_delay: m must be >= 1");

  const auto xs = x.samples();
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> c(n);
  double c0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = xs[i] - mean;
    c0 += c[i] * c[i];
  }
  if (!(c0 > 0.0)) throw DegenerateInput("select_delay: constant signal has no autocorrelation structure");

  const std::size_t upper = std::max<std::size_t>(1, n / (4 * m));
  const double threshold = 1.0 / std::numbers::e;
  for (std::size_t lag = 1; lag <= upper; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += c[i] * c[i + lag];
    if (acc / c0 < threshold) return lag;
  }
  return upper;
}

EmbeddedSeries embed(const TimeSeries& x, std::size_t m, std::size_t tau) {
  if (m < 2) throw std::invalid_argument("embed: m must be >= 2");
  if (tau < 1) throw std::invalid_argument("embed: tau must be >= 1");
  const std::size_t n = x.size();
  if ((m - 1) * tau >= n) throw std::invalid_argument("embed: (m-1)*tau must be < N");
  const std::size_t count = n - (m - 1) * tau;
  std::vector<double> data(count * m);
  const auto xs = x.samples();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t d = 0; d < m; ++d) data[i * m + d] = xs[i + d * tau];
  }
  return EmbeddedSeries(std::move(data), m, tau, count, 1);
}

EmbeddedSeries subsample(const EmbeddedSeries& e, std::size_t max_points) {
  const std::size_t pts = e.points();
  if (max_points == 0 || pts <= max_points) return e;
  const std::size_t step = (pts + max_points - 1) / max_points;
  std::vector<double> data;
  data.reserve(((pts + step - 1) / step) * e.m());
  for (std::size_t i = 0; i < pts; i += step) {
    const auto p = e.point(i);
    data.insert(data.end(), p.begin(), p.end());
  }
  return EmbeddedSeries(std::move(data), e.m(), e.tau(), e.count(), e.stride() * step);
}

namespace {

// Eligible pair distances: i < j with (j - i) * stride > theiler_w.
std::vector<double> pair_distances(const EmbeddedSeries& e, std::size_t theiler_w) {
  const std::size_t pts = e.points();
  const std::size_t m = e.m();
  const std::size_t gap = theiler_w / e.stride() + 1;  // smallest j - i with (j - i) * stride > w
  std::vector<double> out;
  if (pts > gap) out.reserve((pts - gap) * (pts - gap + 1) / 2);
  const double* base = e.data().data();
  for (std::size_t i = 0; i < pts; ++i) {
    const double* a = base + i * m;
    for (std::size_t j = i + gap; j < pts; ++j) {
      const double* b = base + j * m;
      double s = 0.0;
      for (std::size_t d = 0; d < m; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
      }
      out.push_back(std::sqrt(s));
    }
  }
  return out;
}

CorrelationCurve curve_from_distances(const std::vector<double>& dist, std::span<const double> r_grid,
                                      std::size_t points) {
  std::vector<std::size_t> hits(r_grid.size() + 1, 0);
  for (double d : dist) {
    // first radius with d <= r; closed ball, so theta(0) = 1
    const auto it = std::lower_bound(r_grid.begin(), r_grid.end(), d);
    ++hits[static_cast<std::size_t>(it - r_grid.begin())];
  }
  CorrelationCurve c;
  c.r_values.assign(r_grid.begin(), r_grid.end());
  c.c_values.resize(r_grid.size());
  c.points = points;
  c.pairs = dist.size();
  std::size_t running = 0;
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    running += hits[k];
    c.c_values[k] = static_cast<double>(running) / static_cast<double>(dist.size());
  }
  return c;
}

void check_grid(std::span<const double> r_grid) {
  if (r_grid.empty()) throw std::invalid_argument("correlation_integral: empty radius grid");
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    if (!(r_grid[k] > 0.0) || !std::isfinite(r_grid[k])) {
      throw std::invalid_argument("correlation_integral: radii must be positive and finite");
    }
    if (k > 0 && !(r_grid[k] > r_grid[k - 1])) {
      throw std::invalid_argument("correlation_integral: radii must be strictly ascending");
    }
  }
}

double quantile_of(std::vector<double> v, double q) {
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
  return v[idx];
}

}  // namespace

CorrelationCurve correlation_integral(const EmbeddedSeries& e, std::span<const double> r_grid,
                                      std::size_t theiler_w) {
  check_grid(r_grid);
  const auto dist = pair_distances(e, theiler_w);
  if (dist.empty()) {
    throw DegenerateInput("correlation_integral: fewer than two vectors remain after Theiler exclusion");
  }
  return curve_from_distances(dist, r_grid, e.points());
}

CdEstimate fit_scaling_region(const CorrelationCurve& curve) {
  const std::size_t n = curve.r_values.size();
  std::size_t first = 0;
  while (first < n && !(curve.c_values[first] > 0.0)) ++first;
  if (n - first < kCdMinWindow) {
    throw EstimationFailed("correlation_dimension: fewer than 5 usable grid points");
  }
  std::vector<double> lx(n, 0.0);
  std::vector<double> ly(n, 0.0);
  for (std::size_t k = first; k < n; ++k) {
    lx[k] = std::log(curve.r_values[k]);
    ly[k] = std::log(curve.c_values[k]);
  }

  CdEstimate best;
  bool have = false;
  for (std::size_t lo = first; lo + kCdMinWindow <= n; ++lo) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = lo; k < n; ++k) {
      sx += lx[k];
      sy += ly[k];
      sxx += lx[k] * lx[k];
      sxy += lx[k] * ly[k];
      syy += ly[k] * ly[k];
      const double cnt = static_cast<double>(k - lo + 1);
      if (k - lo + 1 < kCdMinWindow) continue;
      const double vx = sxx - sx * sx / cnt;
      const double vy = syy - sy * sy / cnt;
      const double cxy = sxy - sx * sy / cnt;
      if (!(vx > 0.0)) continue;
      const double slope = cxy / vx;
      const double r2 = vy > 0.0 ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 0.0;
      if (!have || r2 > best.r_squared) {
        have = true;
        best.cd = std::max(slope, 0.0);
        best.r_squared = r2;
        best.fit_lo = lo;
        best.fit_hi = k;
      }
    }
  }
  if (!have) throw EstimationFailed("correlation_dimension: no valid scaling window");
  best.curve = curve;
  return best;
}

CdEstimate correlation_dimension(const TimeSeries& x, const EmbeddingConfig& cfg) {
  const auto [lo_it, hi_it] = std::minmax_element(x.values().begin(), x.values().end());
  if (*lo_it == *hi_it) throw DegenerateInput("correlation_dimension: constant signal");
  if (cfg.m < 2) throw std::invalid_argument("correlation_dimension: m must be >= 2");

  const std::size_t tau = cfg.tau > 0 ? cfg.tau : select_delay(x, cfg.m);
  const auto full = embed(x, cfg.m, tau);
  const auto e = subsample(full, cfg.max_points);
  const std::size_t w = cfg.theiler_w.value_or(tau);

  const auto dist = pair_distances(e, w);
  if (dist.size() < 2) {
    throw DegenerateInput("correlation_dimension: too few vector pairs after Theiler exclusion");
  }

  double r_lo = quantile_of(dist, 0.01);
  const double r_hi = quantile_of(dist, 0.90);
  if (!(r_lo > 0.0)) {
    double smallest = 0.0;
    for (double d : dist) {
      if (d > 0.0 && (smallest == 0.0 || d < smallest)) smallest = d;
    }
    r_lo = smallest;
  }
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) {
    throw EstimationFailed("correlation_dimension: pair distances span no usable radius range");
  }

  std::vector<double> grid(kCdGridPoints);
  const double a = std::log(r_lo);
  const double b = std::log(r_hi);
  for (std::size_t k = 0; k < kCdGridPoints; ++k) {
    grid[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(kCdGridPoints - 1));
  }
  auto est = fit_scaling_region(curve_from_distances(dist, grid, e.points()));
  est.tau = tau;
  return est;
}

// ---------------------------------------------------------------------------

AmplitudeHistogram amplitude_histogram(const TimeSeries& x, std::size_t k_bins) {
  if (k_bins < 2) throw std::invalid_argument("amplitude_histogram: need at least 2 bins");
  const auto [lo_it, hi_it] = std::minmax_element(x.values().begin(), x.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(k_bins);

  AmplitudeHistogram h;
  h.edges.resize(k_bins + 1);
  for (std::size_t i = 0; i <= k_bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;

  std::vector<std::size_t> counts(k_bins, 0);
  for (double v : x.values()) {
    std::size_t idx = 0;
    if (width > 0.0) {
      idx = static_cast<std::size_t>(std::floor((v - lo) / width));
      idx = std::min(idx, k_bins - 1);
    }
    ++counts[idx];
  }
  h.probs.resize(k_bins);
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < k_bins; ++i) h.probs[i] = static_cast<double>(counts[i]) / n;
  return h;
}

double renyi_from_probs(std::span<const double> probs, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("renyi_entropy: alpha must be > 0 and != 1");
  }
  double s = 0.0;
  for (double p : probs) {
    if (p > 0.0) s += std::pow(p, alpha);
  }
  return std::log(s) / (1.0 - alpha);
}

double renyi_entropy(const TimeSeries& x, const RenyiConfig& cfg) {
  if (!(cfg.alpha > 0.0) || cfg.alpha == 1.0 || !std::isfinite(cfg.alpha)) {
    throw std::invalid_argument("renyi_entropy: alpha must be > 0 and != 1");
  }
  const auto h = amplitude_histogram(x, cfg.k_bins);
  return renyi_from_probs(h.probs, cfg.alpha);
}

// ---------------------------------------------------------------------------

C0Breakdown c0_complexity(const TimeSeries& x) {
  Spectrum spec = fft(x);
  const std::size_t n = spec.size();
  C0Breakdown out;
  for (const auto& v : spec.coeffs) out.g_n += std::norm(v);
  out.g_n /= static_cast<double>(n);
  for (double v : x.values()) out.total_energy += v * v;
  if (!(out.total_energy > 0.0)) {
    out.degenerate = true;
    return out;
  }

  for (auto& v : spec.coeffs) {
    if (!(std::norm(v) > out.g_n)) v = cplx(0.0, 0.0);
  }
  const auto y = ifft_complex(spec);
  const auto xs = x.samples();
  for (std::size_t i = 0; i < n; ++i) {
    out.regular_energy += std::norm(y[i]);
    out.random_energy += std::norm(cplx(xs[i], 0.0) - y[i]);
  }
  out.c0 = std::clamp(out.random_energy / out.total_energy, 0.0, 1.0);
  return out;
}

}  // namespace eegdep
