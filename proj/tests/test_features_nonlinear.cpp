#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eegdep/errors.hpp"
#include "eegdep/features_nonlinear.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace eegdep;

namespace {

// First lag where the biased sample autocorrelation drops below 1/e.
std::size_t delay_oracle(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  for (std::size_t lag = 1; lag < x.size(); ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < x.size(); ++i) c += (x[i] - mean) * (x[i + lag] - mean);
    if (c / c0 < std::exp(-1.0)) return lag;
  }
  return x.size();
}

}  // namespace

TEST_CASE("delay selection") {
  CHECK(select_delay(TimeSeries(fixture::gaussian(1, 10000), 250.0)) == 1);
  const auto s = fixture::sine(10.0, 250.0, 10000);
  const auto tau = select_delay(TimeSeries(s, 250.0));
  CHECK(tau == delay_oracle(s));
  CHECK(tau >= 4);
  CHECK(tau <= 5);
  CHECK_THROWS_AS(select_delay(TimeSeries(std::vector<double>(100, 2.0), 250.0)), DegenerateInput);
}

TEST_CASE("delay is clamped to N / (4m)") {
  const auto slow = fixture::sine(0.05, 250.0, 1000);
  CHECK(select_delay(TimeSeries(slow, 250.0), 10) == 25);
}

TEST_CASE("embedding follows the delay-vector definition") {
  const TimeSeries x({1, 2, 3, 4, 5}, 1.0);
  const auto e1 = embed(x, 2, 1);
  REQUIRE(e1.points() == 4);
  CHECK(e1.data() == std::vector<double>{1, 2, 2, 3, 3, 4, 4, 5});
  const auto e2 = embed(x, 2, 2);
  REQUIRE(e2.points() == 3);
  CHECK(e2.data() == std::vector<double>{1, 3, 2, 4, 3, 5});
  CHECK(embed(TimeSeries(fixture::gaussian(2, 10000), 250.0), 10, 5).count() == 9955);
  CHECK_THROWS_AS(embed(x, 3, 3), std::invalid_argument);
}

TEST_CASE("embedding count is N - (m - 1) tau") {
  for (std::size_t n : {50u, 333u, 1000u}) {
    for (std::size_t m : {2u, 5u, 10u}) {
      for (std::size_t tau : {1u, 3u, 4u}) {
        if ((m - 1) * tau >= n) continue;
        const auto e = embed(TimeSeries(fixture::gaussian(n, n), 1.0), m, tau);
        CHECK(e.count() == n - (m - 1) * tau);
        CHECK(e.points() == e.count());
      }
    }
  }
}

TEST_CASE("subsampling strides evenly and records the stride") {
  const auto e = embed(TimeSeries(fixture::gaussian(3, 10000), 1.0), 10, 5);
  const auto s = subsample(e, 2000);
  CHECK(s.points() <= 2000);
  CHECK(s.stride() == 5);
  CHECK(s.count() == e.count());
  for (std::size_t i = 0; i < s.points(); i += 97) {
    const auto a = s.point(i);
    const auto b = e.point(i * 5);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  CHECK(subsample(e, 0).points() == e.points());
}

TEST_CASE("two vectors five apart") {
  const EmbeddedSeries e({0.0, 0.0, 3.0, 4.0}, 2, 1, 2, 1);
  const std::vector<double> grid{4.0, 5.0, 6.0};
  const auto c = correlation_integral(e, grid, 0);
  CHECK(c.c_values == std::vector<double>{0.0, 1.0, 1.0});  // closed ball at r = 5
  CHECK(c.pairs == 1);
}

TEST_CASE("identical vectors give C = 1 at every radius") {
  const EmbeddedSeries e(std::vector<double>(30, 1.25), 3, 1, 10, 1);
  const std::vector<double> grid{1e-9, 0.1, 7.0};
  for (double v : correlation_integral(e, grid, 0).c_values) CHECK(v == 1.0);
}

TEST_CASE("correlation integral equals the brute-force pair counter") {
  for (std::size_t points : {20u, 200u, 400u}) {
    Rng rng(points);
    const auto data = oracle::gaussian_vector(rng, points * 3);
    for (std::size_t stride : {1u, 3u}) {
      const EmbeddedSeries e(data, 3, 1, points, stride);
      std::vector<double> grid;
      for (int k = 0; k < 20; ++k) grid.push_back(0.1 * std::pow(1.25, k));
      for (std::size_t w : {0u, 2u, 7u}) {
        const auto c = correlation_integral(e, grid, w);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(c.c_values[k] == oracle::pair_fraction(e, grid[k], w));
        for (std::size_t k = 1; k < grid.size(); ++k) CHECK(c.c_values[k] >= c.c_values[k - 1]);
        const std::vector<double> huge{1e6};
        CHECK(correlation_integral(e, huge, w).c_values[0] == 1.0);
      }
    }
  }
}

TEST_CASE("correlation integral rejects bad grids and empty pair sets") {
  const EmbeddedSeries e({0.0, 1.0, 2.0}, 1, 1, 3, 1);
  CHECK_THROWS_AS(correlation_integral(e, std::vector<double>{}, 0), std::invalid_argument);
  CHECK_THROWS_AS(correlation_integral(e, std::vector<double>{2.0, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(correlation_integral(e, std::vector<double>{0.0, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(correlation_integral(e, std::vector<double>{1.0}, 5), DegenerateInput);
}

TEST_CASE("scaling fit recovers an exact power law") {
  CorrelationCurve c;
  for (int k = 0; k < 24; ++k) {
    const double r = std::exp(-3.0 + 0.1 * k);
    c.r_values.push_back(r);
    c.c_values.push_back(0.01 * std::pow(r, 2.5));
  }
  const auto est = fit_scaling_region(c);
  CHECK(est.cd == doctest::Approx(2.5));
  CHECK(est.r_squared == doctest::Approx(1.0));
  CHECK(est.fit_hi - est.fit_lo + 1 >= kCdMinWindow);
}

TEST_CASE("correlation dimension reference signals") {
  const auto l = correlation_dimension(lorenz(LorenzParams{}));
  CHECK(l.cd >= 1.9);
  CHECK(l.cd <= 2.2);
  const auto s = correlation_dimension(fixture::sine_ts(7.77, 250.0, 10000));
  CHECK(s.cd >= 0.9);
  CHECK(s.cd <= 1.1);
  EmbeddingConfig m5;
  m5.m = 5;
  CHECK(correlation_dimension(TimeSeries(fixture::uniform(8, 10000), 250.0), m5).cd >= 4.0);
  CHECK_THROWS_AS(correlation_dimension(TimeSeries(std::vector<double>(500, 1.0), 250.0)), DegenerateInput);
}

TEST_CASE("correlation dimension is invariant under positive affine maps") {
  LorenzParams p;
  p.n = 10000;
  const auto x = lorenz(p);
  const auto base = correlation_dimension(x).cd;
  for (auto [a, b] : {std::pair{0.001, 5.0}, std::pair{40.0, -3.0}}) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = a * x[i] + b;
    CHECK(std::abs(correlation_dimension(TimeSeries(y, x.fs())).cd - base) <= 0.05);
  }
}

TEST_CASE("explicit delay and Theiler window are honoured") {
  EmbeddingConfig cfg;
  cfg.tau = 3;
  cfg.theiler_w = 0;
  const auto est = correlation_dimension(fixture::sine_ts(7.77, 250.0, 4000), cfg);
  CHECK(est.tau == 3);
  CHECK(est.curve.r_values.size() == kCdGridPoints);
}

TEST_CASE("renyi entropy reference values") {
  std::vector<double> flat;
  for (int rep = 0; rep < 50; ++rep) {
    for (int b = 0; b < 100; ++b) flat.push_back(b);
  }
  CHECK(renyi_entropy(TimeSeries(flat, 1.0)) == doctest::Approx(std::log(100.0)).epsilon(1e-12));
  CHECK(renyi_entropy(TimeSeries(std::vector<double>(300, 4.0), 1.0)) == 0.0);
  const std::vector<double> half{0.5, 0.5};
  CHECK(renyi_from_probs(half, 2.0) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(renyi_from_probs(half, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(renyi_from_probs(half, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(amplitude_histogram(TimeSeries(flat, 1.0), 1), std::invalid_argument);
}

TEST_CASE("renyi entropy: affine invariance, Shannon limit, monotone in alpha") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto x = fixture::gaussian(seed, 4000);
    const auto tone = fixture::sine(6.0, 250.0, 4000, static_cast<double>(seed) / 3.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += tone[i];
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 7.5 * x[i] - 2.0;
    const TimeSeries tx(x, 250.0);
    const TimeSeries ty(y, 250.0);
    const double h = renyi_entropy(tx);
    CHECK(std::abs(renyi_entropy(ty) - h) <= 1e-9);
    CHECK(std::abs(renyi_entropy(tx, RenyiConfig{100, 0.999}) - oracle::shannon(x, 100)) <= 1e-2);
    double prev = 1e300;
    for (double alpha : {0.5, 0.9, 2.0, 3.0, 4.0, 10.0}) {
      const double v = renyi_entropy(tx, RenyiConfig{100, alpha});
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("c0 reference values") {
  const auto sine = c0_complexity(fixture::sine_ts(10.0, 250.0, 10000));
  CHECK(sine.c0 <= 1e-20);
  CHECK(sine.g_n == doctest::Approx(1.0 / (2.0 * 10000.0)));
  const auto zero = c0_complexity(TimeSeries(std::vector<double>(512, 0.0), 250.0));
  CHECK(zero.c0 == 0.0);
  CHECK(zero.degenerate);
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) sum += c0_complexity(TimeSeries(fixture::gaussian(seed, 10000), 250.0)).c0;
  CHECK(std::abs(sum / 10.0 - (1.0 - 2.0 / std::exp(1.0))) <= 0.04);
}

TEST_CASE("c0 matches the direct oracle and its energy invariants") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 100 + 37 * seed;
    auto x = fixture::uniform(seed, n);
    const auto tone = fixture::sine(11.0, 250.0, n, 0.7);
    for (std::size_t i = 0; i < n; ++i) x[i] += tone[i];
    const auto r = c0_complexity(TimeSeries(x, 250.0));
    CHECK(std::abs(r.c0 - oracle::c0(x)) <= 1e-12);
    CHECK(r.c0 >= 0.0);
    CHECK(r.c0 <= 1.0);
    CHECK(r.regular_energy + r.random_energy == doctest::Approx(r.total_energy).epsilon(1e-6));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = -40.0 * x[i];
    CHECK(std::abs(c0_complexity(TimeSeries(y, 250.0)).c0 - r.c0) <= 1e-9);
  }
}
