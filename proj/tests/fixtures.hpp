#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "eegdep/classify.hpp"
#include "eegdep/signal.hpp"
#include "eegdep/synth.hpp"

namespace fixture {

inline std::vector<double> sine(double f, double fs, std::size_t n, double amp = 1.0, double phase = 0.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs + phase);
  }
  return v;
}

inline eegdep::TimeSeries sine_ts(double f, double fs, std::size_t n, double amp = 1.0) {
  return eegdep::TimeSeries(sine(f, fs, n, amp), fs);
}

inline std::vector<double> uniform(std::uint64_t seed, std::size_t n) {
  eegdep::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

inline std::vector<double> gaussian(std::uint64_t seed, std::size_t n) {
  eegdep::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.gaussian();
  return v;
}

// 40 s of a unit 10 Hz sine at 250 Hz plus three 1 s Gaussian bumps of height 5.
struct Blink {
  std::vector<double> clean;
  std::vector<double> contaminated;
  double fs = 250.0;
};

inline Blink blink() {
  Blink b;
  const std::size_t n = 10000;
  b.clean = sine(10.0, b.fs, n);
  b.contaminated = b.clean;
  const double sigma = 1.0 / 6.0;
  for (double centre : {8.0, 20.0, 32.0}) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / b.fs - centre;
      if (std::abs(t) <= 0.5) b.contaminated[i] += 5.0 * std::exp(-0.5 * (t / sigma) * (t / sigma));
    }
  }
  return b;
}

inline eegdep::FeatureMatrix matrix(const std::vector<std::vector<double>>& rows,
                                    const std::vector<eegdep::Label>& labels) {
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back("s" + std::to_string(1000 + i));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < (rows.empty() ? 0 : rows[0].size()); ++c) names.push_back("f" + std::to_string(c));
  return eegdep::FeatureMatrix(ids, names, values, labels);
}

// Two Gaussian blobs in d dimensions whose centres sit `gap` apart along every axis.
inline eegdep::FeatureMatrix blobs(std::uint64_t seed, std::size_t n_dep, std::size_t n_ctl, std::size_t d,
                                   double gap) {
  eegdep::Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<eegdep::Label> labels;
  for (std::size_t i = 0; i < n_dep + n_ctl; ++i) {
    const bool dep = i < n_dep;
    std::vector<double> r(d);
    for (double& v : r) v = rng.gaussian() + (dep ? gap : 0.0);
    rows.push_back(r);
    labels.push_back(dep ? eegdep::Label::kDepressed : eegdep::Label::kControl);
  }
  return matrix(rows, labels);
}

// Linearly separable 2-D set: points with |x + y| >= margin, label by sign.
inline eegdep::FeatureMatrix separable(std::uint64_t seed, std::size_t n, double margin = 0.5) {
  eegdep::Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<eegdep::Label> labels;
  while (rows.size() < n) {
    const double x = 4.0 * rng.uniform() - 2.0;
    const double y = 4.0 * rng.uniform() - 2.0;
    if (std::abs(x + y) < margin) continue;
    rows.push_back({x, y});
    labels.push_back(x + y > 0 ? eegdep::Label::kDepressed : eegdep::Label::kControl);
  }
  return matrix(rows, labels);
}

inline eegdep::FeatureMatrix xor4() {
  using eegdep::Label;
  return matrix({{0, 0}, {1, 1}, {0, 1}, {1, 0}},
                {Label::kControl, Label::kControl, Label::kDepressed, Label::kDepressed});
}

}  // namespace fixture
