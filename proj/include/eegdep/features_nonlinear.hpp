#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eegdep/signal.hpp"

namespace eegdep {

// ---------------------------------------------------------------------------
// Delay embedding

struct EmbeddingConfig {
  std::size_t m = 10;
  std::size_t tau = 0;                      // 0 selects the delay from the autocorrelation
  std::optional<std::size_t> theiler_w;     // unset: same as the resolved tau
  std::size_t max_points = 2000;            // evenly strided subsample cap for CD; 0 = no cap
};

/// Delay vectors stored row-major. `count` is N - (m-1) tau, the number of
/// vectors the full series yields; `points()` may be fewer after subsampling,
/// in which case row i corresponds to original vector i * stride.
class EmbeddedSeries {
 public:
  EmbeddedSeries(std::vector<double> data, std::size_t m, std::size_t tau, std::size_t count,
                 std::size_t stride);

  std::size_t m() const noexcept { return m_; }
  std::size_t tau() const noexcept { return tau_; }
  std::size_t count() const noexcept { return count_; }
  std::size_t stride() const noexcept { return stride_; }
  std::size_t points() const noexcept { return data_.size() / m_; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * m_, m_);
  }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::vector<double> data_;
  std::size_t m_;
  std::size_t tau_;
  std::size_t count_;
  std::size_t stride_;
};

/// Smallest lag at which the normalized autocorrelation falls below 1/e,
/// clamped to [1, N / (4 m)]. Throws DegenerateInput for constant input.
std::size_t select_delay(const TimeSeries& x, std::size_t m = 10);

/// X(i) = (x(i), x(i + tau), ..., x(i + (m-1) tau)) for every valid i.
EmbeddedSeries embed(const TimeSeries& x, std::size_t m, std::size_t tau);

/// Keeps at most `max_points` evenly strided vectors (stride = ceil(points / max)).
EmbeddedSeries subsample(const EmbeddedSeries& e, std::size_t max_points);

// ---------------------------------------------------------------------------
// Correlation integral and dimension

struct CorrelationCurve {
  std::vector<double> r_values;
  std::vector<double> c_values;
  std::size_t points = 0;  // M, number of embedded vectors used
  std::size_t pairs = 0;   // eligible unordered pairs
};

/// Fraction of unordered pairs i < j, separated by more than theiler_w
/// original samples' worth of vector index, with Euclidean distance <= r.
/// Distances are computed once and binned over the whole grid.
CorrelationCurve correlation_integral(const EmbeddedSeries& e, std::span<const double> r_grid,
                                      std::size_t theiler_w);

struct CdEstimate {
  double cd = 0.0;
  std::size_t fit_lo = 0;  // inclusive grid indices of the scaling window
  std::size_t fit_hi = 0;
  double r_squared = 0.0;
  std::size_t tau = 0;
  CorrelationCurve curve;
};

inline constexpr std::size_t kCdGridPoints = 24;
inline constexpr std::size_t kCdMinWindow = 5;

/// Least-squares slope of ln C against ln r over the contiguous window of at
/// least kCdMinWindow grid points (all C > 0) with the highest R^2. Ties go
/// to the window starting at smaller r.
CdEstimate fit_scaling_region(const CorrelationCurve& curve);

/// Embeds, subsamples to cfg.max_points, builds the curve on a logarithmic
/// grid between the 1st and 90th percentile of pair distances and fits the
/// scaling region.
CdEstimate correlation_dimension(const TimeSeries& x, const EmbeddingConfig& cfg = {});

// ---------------------------------------------------------------------------
// Renyi entropy

struct RenyiConfig {
  std::size_t k_bins = 100;
  double alpha = 2.0;
};

struct AmplitudeHistogram {
  std::vector<double> edges;  // k_bins + 1
  std::vector<double> probs;
};

/// Equal-width bins over [min x, max x]; the maximum falls in the last bin.
AmplitudeHistogram amplitude_histogram(const TimeSeries& x, std::size_t k_bins);

/// H = ln(sum p^alpha) / (1 - alpha), natural log, empty bins skipped.
double renyi_from_probs(std::span<const double> probs, double alpha);

double renyi_entropy(const TimeSeries& x, const RenyiConfig& cfg = {});

// ---------------------------------------------------------------------------
// C0 complexity

struct C0Breakdown {
  double g_n = 0.0;             // mean of |X(k)|^2
  double total_energy = 0.0;    // sum |x(n)|^2
  double regular_energy = 0.0;  // sum |y(n)|^2
  double random_energy = 0.0;   // sum |x(n) - y(n)|^2
  double c0 = 0.0;
  bool degenerate = false;      // all-zero input
};

C0Breakdown c0_complexity(const TimeSeries& x);

}  // namespace eegdep
