// Acceptance suite: one PASS/FAIL line per criterion, measured values underneath.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "eegdep/errors.hpp"
#include "eegdep/pipeline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace eegdep;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    notes_.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass_ = pass_ && ok;
  }

  bool report(int index) const {
    std::printf("[%s] criterion %d: %s\n", pass_ ? "PASS" : "FAIL", index, title_.c_str());
    for (const auto& n : notes_) std::printf("        %s\n", n.c_str());
    std::fflush(stdout);
    return pass_;
  }

 private:
  std::string title_;
  std::vector<std::string> notes_;
  bool pass_ = true;
};

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

fs::path scratch_root() {
  static const fs::path root = fs::temp_directory_path() / ("eegdep-acceptance-" + std::to_string(::getpid()));
  return root;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EEGDEP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool trees_identical(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    if (!fs::exists(b / rel) || slurp(entry.path()) != slurp(b / rel)) return false;
    ++files;
  }
  std::size_t other = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) other += entry.is_regular_file() ? 1 : 0;
  return other == files;
}

// Synthesizes a cohort, runs the library extraction path and returns the labeled matrix.
FeatureMatrix cohort_matrix(double effect, std::uint64_t seed, const std::string& feature_set, const fs::path& dir) {
  PipelineConfig cfg;
  cfg.seed = seed;
  cfg.cohort.seed = seed;
  cfg.cohort.effect = effect;
  cfg.feature_set = feature_set;
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_cohort(synth_cohort(cfg.cohort), dir, cfg);
  const auto r = extract_features(Manifest::load(dir / "manifest.json"), cfg);
  if (!r.skipped.empty()) throw std::runtime_error("extraction skipped " + r.skipped.front());
  return to_feature_matrix(r);
}

// ---------------------------------------------------------------------------

bool criterion_transforms() {
  Criterion c("transform correctness (Parseval, DFT oracle, round trip, N=10000 speed)");

  double worst_parseval = 0.0;
  double worst_round = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(7001, seed));
    const std::size_t n = seed == 0 ? 10000 : 1 + static_cast<std::size_t>(rng.uniform() * 4096.0);
    const auto x = oracle::gaussian_vector(rng, n);
    const auto s = fft(x);
    double lhs = 0.0;
    double rhs = 0.0;
    double peak = 0.0;
    for (const auto& v : s.coeffs) lhs += std::norm(v);
    for (double v : x) {
      rhs += v * v;
      peak = std::max(peak, std::abs(v));
    }
    rhs /= static_cast<double>(n);
    worst_parseval = std::max(worst_parseval, std::abs(lhs - rhs) / rhs);
    const auto back = ifft_complex(s);
    for (std::size_t i = 0; i < n; ++i) worst_round = std::max(worst_round, std::abs(back[i] - x[i]) / peak);
  }
  c.check(worst_parseval <= 1e-9, fmt("Parseval on 100 seeded inputs: worst relative error %.3g (tol 1e-9)", worst_parseval));
  c.check(worst_round <= 1e-9, fmt("ifft(fft(x)) = x on 100 seeded inputs: worst error %.3g of max|x| (tol 1e-9)", worst_round));

  double worst_dft = 0.0;
  std::size_t lengths = 0;
  for (std::size_t n = 1; n <= 512; n += (n < 64 ? 1 : 13)) {
    const auto x = fixture::gaussian(9000 + n, n);
    const auto s = fft(x);
    const auto ref = oracle::dft(x);
    for (std::size_t k = 0; k < n; ++k) worst_dft = std::max(worst_dft, std::abs(s.coeffs[k] - ref[k]));
    ++lengths;
  }
  {
    const auto x = fixture::gaussian(9512, 512);
    const auto s = fft(x);
    const auto ref = oracle::dft(x);
    for (std::size_t k = 0; k < 512; ++k) worst_dft = std::max(worst_dft, std::abs(s.coeffs[k] - ref[k]));
    ++lengths;
  }
  c.check(worst_dft <= 1e-9,
          fmt2("fft vs direct O(N^2) DFT on %.0f lengths N <= 512: worst abs error %.3g (tol 1e-9)",
               static_cast<double>(lengths), worst_dft));

  const auto big = fixture::gaussian(424242, 10000);
  auto t0 = Clock::now();
  const auto first = fft(big);
  const double cold_ms = 1e3 * seconds_since(t0);
  double best_ms = 1e9;
  for (int rep = 0; rep < 5; ++rep) {
    t0 = Clock::now();
    const auto s = fft(big);
    best_ms = std::min(best_ms, 1e3 * seconds_since(t0));
    if (s.coeffs[0] != first.coeffs[0]) best_ms = 1e9;
  }
  c.check(cold_ms < 50.0, fmt2("N=10000 single transform: first call %.2f ms, best of 5 %.2f ms (limit 50 ms)", cold_ms,
                               best_ms));
  return c.report(1);
}

bool criterion_correlation_dimension() {
  Criterion c("correlation dimension (Lorenz, sine, noise, degenerate, brute-force counter)");

  const auto lx = lorenz(LorenzParams{});
  auto t0 = Clock::now();
  const auto lcd = correlation_dimension(lx);
  const double lt = seconds_since(t0);
  c.check(lcd.cd >= 1.9 && lcd.cd <= 2.2,
          fmt2("Lorenz x (50000 points, m=10, auto tau=%.0f): cd = %.4f in [1.9, 2.2]", static_cast<double>(lcd.tau),
               lcd.cd));
  c.check(lt < 5.0, fmt("Lorenz run time %.3f s (limit 5 s)", lt));

  const auto sine = fixture::sine_ts(7.77, 250.0, 10000);
  t0 = Clock::now();
  const auto scd = correlation_dimension(sine);
  const double st = seconds_since(t0);
  c.check(scd.cd >= 0.9 && scd.cd <= 1.1, fmt("sine 7.77 Hz at 250 Hz, N=10000: cd = %.4f in [0.9, 1.1]", scd.cd));
  c.check(st < 5.0, fmt("sine run time %.3f s (limit 5 s)", st));

  EmbeddingConfig m5;
  m5.m = 5;
  const TimeSeries wn(fixture::uniform(31337, 10000), 250.0);
  t0 = Clock::now();
  const auto ncd = correlation_dimension(wn, m5);
  const double nt = seconds_since(t0);
  c.check(ncd.cd >= 4.0, fmt("white uniform noise, m=5: cd = %.4f (need >= 4.0)", ncd.cd));
  c.check(nt < 5.0, fmt("noise run time %.3f s (limit 5 s)", nt));

  bool threw = false;
  try {
    correlation_dimension(TimeSeries(std::vector<double>(10000, 3.0), 250.0));
  } catch (const DegenerateInput&) {
    threw = true;
  }
  c.check(threw, "constant input raises DegenerateInput");

  std::size_t compared = 0;
  std::size_t mismatched = 0;
  for (std::size_t points : {50u, 200u, 500u}) {
    for (std::size_t w : {0u, 3u, 10u}) {
      Rng rng(derive_seed(points, w));
      const auto data = oracle::gaussian_vector(rng, points * 3);
      for (std::size_t stride : {1u, 4u}) {
        const EmbeddedSeries e(data, 3, 1, points, stride);
        std::vector<double> grid;
        for (int k = 0; k < 30; ++k) grid.push_back(0.05 * std::pow(1.2, k));
        const auto curve = correlation_integral(e, grid, w);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          ++compared;
          if (curve.c_values[k] != oracle::pair_fraction(e, grid[k], w)) ++mismatched;
        }
      }
    }
  }
  c.check(mismatched == 0, fmt2("correlation_integral vs brute-force pair counter (M <= 500): %.0f values, %.0f mismatches",
                                static_cast<double>(compared), static_cast<double>(mismatched)));
  return c.report(2);
}

std::vector<std::vector<double>> entropy_signals() {
  std::vector<std::vector<double>> out;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t n = 2000 + 160 * s;
    switch (s % 5) {
      case 0: out.push_back(fixture::gaussian(100 + s, n)); break;
      case 1: out.push_back(fixture::uniform(100 + s, n)); break;
      case 2: out.push_back(noise(NoiseKind::kPink, n, 100 + s).values()); break;
      case 3: {
        auto v = fixture::sine(3.0 + static_cast<double>(s) / 7.0, 250.0, n);
        const auto g = fixture::gaussian(100 + s, n);
        for (std::size_t i = 0; i < n; ++i) v[i] += 0.3 * g[i];
        out.push_back(v);
        break;
      }
      default: {
        LorenzParams p;
        p.n = n;
        p.initial = {1.0 + 0.01 * static_cast<double>(s), 1.0, 1.0};
        out.push_back(lorenz(p).values());
      }
    }
  }
  return out;
}

bool criterion_renyi() {
  Criterion c("Renyi entropy (uniform ln K, Shannon limit, monotone in alpha)");

  std::vector<double> flat;
  for (int rep = 0; rep < 100; ++rep) {
    for (int b = 0; b < 100; ++b) flat.push_back(b);
  }
  const double h_uniform = renyi_entropy(TimeSeries(flat, 250.0), RenyiConfig{100, 2.0});
  c.check(std::abs(h_uniform - std::log(100.0)) <= 1e-9,
          fmt("uniform over K=100: H = %.12f vs ln 100 (tol 1e-9)", h_uniform));

  double worst_shannon = 0.0;
  std::size_t monotone_bad = 0;
  const auto signals = entropy_signals();
  for (const auto& x : signals) {
    const TimeSeries ts(x, 250.0);
    const double near_one = renyi_entropy(ts, RenyiConfig{100, 0.999});
    worst_shannon = std::max(worst_shannon, std::abs(near_one - oracle::shannon(x, 100)));
    const double h05 = renyi_entropy(ts, RenyiConfig{100, 0.5});
    const double h2 = renyi_entropy(ts, RenyiConfig{100, 2.0});
    const double h4 = renyi_entropy(ts, RenyiConfig{100, 4.0});
    if (!(h05 >= h2 && h2 >= h4)) ++monotone_bad;
  }
  c.check(worst_shannon <= 1e-2,
          fmt("alpha = 0.999 vs Shannon on 50 seeded signals: worst |diff| %.4g nats (tol 1e-2)", worst_shannon));
  c.check(monotone_bad == 0, fmt("H(0.5) >= H(2) >= H(4) violated on %.0f of 50 signals", static_cast<double>(monotone_bad)));
  return c.report(3);
}

bool criterion_c0() {
  Criterion c("C0 complexity (regular sine, white-noise mean, direct oracle, range)");

  const auto s = c0_complexity(fixture::sine_ts(10.0, 250.0, 10000));
  c.check(s.c0 <= 1e-20, fmt("integer-period sine: c0 = %.3g (exact zero up to rounding, tol 1e-20)", s.c0));

  double sum = 0.0;
  bool in_range = true;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = c0_complexity(TimeSeries(fixture::gaussian(5000 + seed, 10000), 250.0));
    sum += r.c0;
    in_range = in_range && r.c0 >= 0.0 && r.c0 <= 1.0;
  }
  const double mean = sum / 50.0;
  c.check(mean >= 0.22 && mean <= 0.30, fmt("white Gaussian noise N=10000, 50 seeds: mean c0 = %.4f in [0.22, 0.30]", mean));

  double worst = 0.0;
  std::size_t inputs = 0;
  auto compare = [&](const std::vector<double>& x) {
    const auto r = c0_complexity(TimeSeries(x, 250.0));
    worst = std::max(worst, std::abs(r.c0 - oracle::c0(x)));
    in_range = in_range && r.c0 >= 0.0 && r.c0 <= 1.0;
    ++inputs;
  };
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 64 + 23 * seed;
    compare(fixture::gaussian(7100 + seed, n));
    auto mix = fixture::sine(9.0, 250.0, n, 2.0);
    const auto u = fixture::uniform(7200 + seed, n);
    for (std::size_t i = 0; i < n; ++i) mix[i] += u[i];
    compare(mix);
  }
  for (std::uint64_t seed = 0; seed < 3; ++seed) compare(fixture::gaussian(5000 + seed, 10000));
  compare(fixture::sine(10.0, 250.0, 10000));
  compare(noise(NoiseKind::kPink, 4096, 11).values());
  c.check(worst <= 1e-12, fmt2("c0 vs direct DFT oracle on %.0f inputs: worst |diff| %.3g (tol 1e-12)",
                               static_cast<double>(inputs), worst));
  c.check(in_range, "c0 within [0, 1] on every input");
  return c.report(4);
}

double middle_rms(const std::vector<double>& v) {
  const std::size_t lo = v.size() / 10;
  const std::size_t hi = v.size() - lo;
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += v[i] * v[i];
  return std::sqrt(s / static_cast<double>(hi - lo));
}

bool criterion_preprocess() {
  Criterion c("preprocessing (bandlimit response, DWT round trip, ocular removal)");

  const FilterSpec band;
  auto gain = [&](double f) {
    const auto x = fixture::sine_ts(f, 250.0, 10000);
    return middle_rms(bandlimit(x, band).values()) / middle_rms(x.values());
  };
  const double g10 = gain(10.0);
  const double g02 = gain(0.2);
  const double g60 = gain(60.0);
  c.check(std::abs(g10 - 1.0) <= 0.05, fmt("10 Hz amplitude ratio %.5f (within +-5%%)", g10));
  c.check(20.0 * std::log10(g02) <= -20.0, fmt("0.2 Hz attenuation %.1f dB (need <= -20 dB)", 20.0 * std::log10(g02)));
  c.check(20.0 * std::log10(g60) <= -20.0, fmt("60 Hz attenuation %.1f dB (need <= -20 dB)", 20.0 * std::log10(g60)));

  double worst = 0.0;
  for (Wavelet w : {Wavelet::kHaar, Wavelet::kDb2, Wavelet::kDb4}) {
    for (std::size_t n : {64u, 1000u, 1001u, 10000u}) {
      const auto x = fixture::gaussian(n + static_cast<std::size_t>(w), n);
      const TimeSeries ts(x, 250.0);
      const auto back = dwt_reconstruct(dwt_decompose(ts, w, 5));
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(back[i] - x[i]));
    }
  }
  c.check(worst <= 1e-8, fmt("DWT round trip (haar, db2, db4; even and odd lengths): worst error %.3g (tol 1e-8)", worst));

  const auto b = fixture::blink();
  const auto cleaned = remove_ocular(TimeSeries(b.contaminated, b.fs));
  const double before = oracle::pearson(b.contaminated, b.clean);
  const double after = oracle::pearson(cleaned.values(), b.clean);
  c.check(after > before, fmt2("synthetic blinks: correlation with clean sine %.4f -> %.4f (must increase)", before, after));
  return c.report(5);
}

bool criterion_classifiers() {
  Criterion c("classifiers vs oracles (KNN exhaustive, SMO KKT, logistic gradient)");

  std::size_t queries = 0;
  std::size_t knn_bad = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(derive_seed(880, seed));
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    for (int i = 0; i < 200; ++i) {
      std::vector<double> r(3);
      for (double& v : r) v = rng.gaussian();
      if (seed == 2) {
        for (double& v : r) v = std::round(v * 2.0);  // coarse grid: many distance ties
      }
      rows.push_back(r);
      labels.push_back(rng.uniform() < 0.45 ? Label::kDepressed : Label::kControl);
    }
    const auto train = fixture::matrix(rows, labels);
    for (int q = 0; q < 40; ++q) {
      std::vector<double> query(3);
      for (double& v : query) v = rng.gaussian();
      if (seed == 2) {
        for (double& v : query) v = std::round(v * 2.0);
      }
      for (std::size_t k = 1; k <= 18; ++k) {
        ++queries;
        if (knn_predict(train, query, KnnConfig{k}) != oracle::knn(train, query, k)) ++knn_bad;
      }
    }
  }
  c.check(knn_bad == 0, fmt2("KNN vs exhaustive sort, 200-point sets, k = 1..18: %.0f queries, %.0f mismatches",
                             static_cast<double>(queries), static_cast<double>(knn_bad)));

  struct Case {
    std::string name;
    FeatureMatrix m;
    SvmParams p;
  };
  std::vector<Case> cases;
  {
    SvmParams lin;
    lin.kernel = KernelSpec{KernelKind::kLinear, 0.0};
    lin.c = 100.0;
    cases.push_back({"separable 2-D, linear, C=100", fixture::separable(5, 60), lin});
    SvmParams rbf;
    rbf.kernel = KernelSpec{KernelKind::kRbf, 1.0};
    rbf.c = 10.0;
    cases.push_back({"XOR, rbf gamma=1, C=10", fixture::xor4(), rbf});
    SvmParams paper;
    paper.kernel = KernelSpec{KernelKind::kRbf, std::ldexp(1.0, -6)};
    paper.c = 2.0;
    cases.push_back({"separable 2-D, rbf gamma=2^-6, C=2", fixture::separable(6, 60, 1.0), paper});
  }
  for (const auto& k : cases) {
    const auto model = svm_train(k.m, k.p);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < k.m.rows(); ++i) correct += svm_predict(model, k.m.row(i)) == k.m.label(i) ? 1 : 0;
    const double kkt = oracle::svm_kkt_violation(model, k.m);
    const double eq = std::abs(oracle::svm_sum_alpha_y(model));
    bool box = true;
    for (double a : model.alphas) box = box && a > 0.0 && a <= k.p.c;
    c.check(correct == k.m.rows(), k.name + ": training accuracy " + std::to_string(correct) + "/" +
                                       std::to_string(k.m.rows()));
    c.check(kkt <= 1e-3, k.name + fmt(": max KKT violation %.3g (tol 1e-3)", kkt));
    c.check(eq <= 1e-6 && box, k.name + fmt(": |sum alpha y| = %.3g (tol 1e-6), alphas inside (0, C]", eq));
  }

  double worst_fd = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = fixture::blobs(300 + seed, 18, 25, 4, 1.0);
    const auto model = logreg_train(m);
    Rng rng(seed);
    for (int probe = 0; probe < 2; ++probe) {
      std::vector<double> w = model.weights;
      double b = model.bias;
      if (probe == 1) {
        for (double& v : w) v += 0.5 * rng.gaussian();
        b += 0.5 * rng.gaussian();
      }
      const auto g = logreg_gradient(m, w, b, model.l2);
      const double h = 1e-5;
      for (std::size_t j = 0; j <= w.size(); ++j) {
        auto wp = w;
        auto wm = w;
        double bp = b;
        double bm = b;
        if (j < w.size()) {
          wp[j] += h;
          wm[j] -= h;
        } else {
          bp += h;
          bm -= h;
        }
        const double fd = (logreg_objective(m, wp, bp, model.l2) - logreg_objective(m, wm, bm, model.l2)) / (2 * h);
        worst_fd = std::max(worst_fd, std::abs(fd - g[j]));
      }
    }
  }
  c.check(worst_fd <= 1e-6, fmt("logistic gradient vs central differences: worst |diff| %.3g (tol 1e-6)", worst_fd));
  return c.report(6);
}

bool criterion_evaluation() {
  Criterion c("evaluation harness (fold structure, separability, null cohort, leakage guard)");
  const fs::path dir = scratch_root() / "cohort";
  const auto knn_grid = preset_grid("paper-knn");

  const auto high = cohort_matrix(3.0, 20240611, "paper-knn-12", dir);
  const auto high_result = grid_search(high, knn_grid, NormalizeMode::kPerFold);
  const auto& rep = high_result.report;
  c.check(rep.per_fold.size() == 43 && rep.confusion.total() == 43 && rep.failed_folds == 0,
          "43-subject cohort: " + std::to_string(rep.per_fold.size()) + " folds, confusion sums to " +
              std::to_string(rep.confusion.total()));
  const double high_acc = rep.scores.accuracy.value_or(0.0);
  c.check(high_acc >= 0.85, fmt2("effect 3 cohort, preset paper-knn: accuracy %.4f (need >= 0.85), best k = %.0f", high_acc,
                                 static_cast<double>(high_result.best_index + 1)));

  const double baseline = 25.0 / 43.0;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto null = cohort_matrix(0.0, derive_seed(777, s), "paper-knn-12", dir);
    sum += grid_search(null, knn_grid, NormalizeMode::kPerFold).report.scores.accuracy.value_or(0.0);
  }
  const double null_mean = sum / 20.0;
  c.check(std::abs(null_mean - baseline) <= 0.10,
          fmt2("effect 0 cohort, preset paper-knn, 20 seeds: mean accuracy %.4f vs baseline %.4f (tol 0.10)", null_mean,
               baseline));

  // Outlier injection: the scaler of the fold holding the outlier out must
  // equal the scaler fit with that row removed, and must not move when the
  // outlier changes.
  auto base = fixture::blobs(4242, 18, 25, 3, 1.5);
  bool guard = true;
  for (std::size_t held : {0u, 20u, 42u}) {
    auto values = base.values();
    for (std::size_t col = 0; col < base.cols(); ++col) values[held * base.cols() + col] = 1e9;
    const FeatureMatrix poisoned(base.subject_ids(), base.feature_names(), values, base.labels());
    const auto a = loocv(poisoned, KnnConfig{3}, NormalizeMode::kPerFold);
    const auto b = loocv(base, KnnConfig{3}, NormalizeMode::kPerFold);
    const auto expected = zscore_fit(base.without_row(held));
    const auto& sa = a.per_fold[held].scaler;
    const auto& sb = b.per_fold[held].scaler;
    guard = guard && sa && sb && sa->means == expected.means && sa->stds == expected.stds &&
            sb->means == expected.means && sb->stds == expected.stds;
  }
  c.check(guard, "per-fold scaler with a 1e9 held-out outlier equals the fit on the training rows alone");
  return c.report(7);
}

bool criterion_conformance() {
  Criterion c("paper-shape conformance (feature counts, presets, end-to-end pipeline)");
  const fs::path root = scratch_root() / "pipeline";
  fs::remove_all(root);
  fs::create_directories(root);

  const std::vector<std::string> ch{"Fp1", "Fpz", "Fp2"};
  const auto knn_cols = feature_columns(ch, resolve_feature_set("paper-knn-12"));
  const auto svm_cols = feature_columns(ch, resolve_feature_set("paper-svm-18"));

  auto t0 = Clock::now();
  const int rc1 = run_cli("pipeline --out " + (root / "a").string());
  const double elapsed = seconds_since(t0);
  const int rc2 = run_cli("pipeline --out " + (root / "b").string());
  c.check(rc1 == 0 && rc2 == 0, "pipeline exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2));
  c.check(elapsed < 120.0, fmt("default-cohort pipeline wall time %.1f s (limit 120 s)", elapsed));
  std::size_t files = 0;
  const bool same = rc1 == 0 && rc2 == 0 && trees_identical(root / "a", root / "b", files);
  c.check(same, "two runs with the fixed seed are byte-identical across " + std::to_string(files) + " files");

  const auto knn = read_feature_csv(root / "a" / "features.csv");
  c.check(knn.columns == knn_cols && knn.rows.size() == 43,
          "paper-knn-12: " + std::to_string(knn.rows.size()) + " rows x " + std::to_string(knn.columns.size()) +
              " feature columns (expect 43 x 12)");

  const int rc3 = run_cli("extract --manifest " + (root / "a" / "recordings" / "manifest.json").string() +
                          " --feature-set paper-svm-18 --out " + (root / "svm.csv").string());
  const auto svm = rc3 == 0 ? read_feature_csv(root / "svm.csv") : ExtractResult{};
  c.check(rc3 == 0 && svm.columns == svm_cols && svm.rows.size() == 43,
          "paper-svm-18: " + std::to_string(svm.rows.size()) + " rows x " + std::to_string(svm.columns.size()) +
              " feature columns (expect 43 x 18)");

  const auto kgrid = preset_grid("paper-knn");
  bool kok = kgrid.size() == 18;
  for (std::size_t i = 0; kok && i < kgrid.size(); ++i) {
    const auto* k = std::get_if<KnnConfig>(&kgrid[i]);
    kok = k != nullptr && k->k == i + 1;
  }
  c.check(kok, "preset paper-knn is the k grid 1..18");
  const auto sgrid = preset_grid("paper-svm");
  const auto* sp = sgrid.size() == 1 ? std::get_if<SvmParams>(&sgrid[0]) : nullptr;
  c.check(sp && sp->kernel.kind == KernelKind::kRbf && sp->c == 2.0 && sp->kernel.gamma == 0.015625,
          "preset paper-svm is rbf, C = 2, gamma = 2^-6");
  return c.report(8);
}

}  // namespace

int main() {
  std::printf("acceptance suite (eegdep %s)\n", kToolVersion);
  std::vector<std::function<bool()>> criteria = {criterion_transforms, criterion_correlation_dimension,
                                                 criterion_renyi,      criterion_c0,
                                                 criterion_preprocess, criterion_classifiers,
                                                 criterion_evaluation, criterion_conformance};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    bool ok = false;
    try {
      ok = criteria[i]();
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion %zu: threw %s\n", i + 1, e.what());
    }
    failed += ok ? 0 : 1;
  }
  std::error_code ec;
  fs::remove_all(scratch_root(), ec);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
