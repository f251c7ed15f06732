#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "eegdep/classify.hpp"

namespace eegdep {

/// kPerFold fits the scaler on each training split only; kGlobal fits it once
/// on the whole matrix before cross-validation.
enum class NormalizeMode { kPerFold, kGlobal };

NormalizeMode parse_normalize_mode(const std::string& s);  // "fold" | "global"
std::string normalize_mode_name(NormalizeMode m);

using ClassifierSpec = std::variant<KnnConfig, SvmParams, LogregParams>;

std::string classifier_name(const ClassifierSpec& spec);
nlohmann::json describe(const ClassifierSpec& spec);

/// Named grids: "paper-knn" (k = 1..18), "paper-svm" (rbf, C = 2,
/// gamma = 2^-6), "svm-linear" (linear, C = 2), "logreg".
std::vector<ClassifierSpec> preset_grid(const std::string& name);
std::vector<std::string> preset_names();

/// Fits `spec` on `train` and predicts each row of `queries` (already scaled).
std::vector<Label> fit_predict(const FeatureMatrix& train, const FeatureMatrix& queries,
                               const ClassifierSpec& spec);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  void add(Label truth, Label predicted);
  bool operator==(const Confusion&) const = default;
};

/// Undefined (nullopt) wherever the denominator is zero.
struct Metrics {
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

Metrics metrics(const Confusion& c);

struct FoldResult {
  std::string subject_id;
  Label truth = Label::kControl;
  std::optional<Label> predicted;  // empty when the fold failed
  std::string failure;
  std::optional<ScalerParams> scaler;  // per-fold mode: parameters fit on the training split
};

struct CvReport {
  std::vector<FoldResult> per_fold;
  Confusion confusion;
  Metrics scores;
  nlohmann::json best_params;
  std::string classifier;
  std::vector<std::string> feature_set;
  NormalizeMode normalize = NormalizeMode::kPerFold;
  std::size_t failed_folds = 0;
  std::vector<std::string> warnings;
};

/// Leave-one-out: every row in turn is held out; scaling (per mode) and the
/// classifier are fitted on the remaining rows. Folds whose training split
/// holds a single class are reported as failed and excluded from metrics.
/// Folds run on up to `jobs` threads; the result does not depend on it.
CvReport loocv(const FeatureMatrix& m, const ClassifierSpec& spec, NormalizeMode mode, std::size_t jobs = 1);

struct GridResult {
  std::size_t best_index = 0;
  ClassifierSpec best;
  CvReport report;
  std::vector<std::optional<double>> accuracies;  // per grid entry, declaration order
};

/// Exhaustive LOOCV over `grid`; highest accuracy wins, first entry on ties.
GridResult grid_search(const FeatureMatrix& m, std::span<const ClassifierSpec> grid, NormalizeMode mode,
                       std::size_t jobs = 1);

struct FeatureGroupStats {
  std::string feature;
  std::size_t n_depressed = 0;
  std::size_t n_control = 0;
  double mean_depressed = 0.0;
  double mean_control = 0.0;
  std::optional<double> relative_diff_pct;  // 100 (mean_D - mean_C) / mean_C
  std::optional<double> welch_t_p;          // two-sided, unequal variances
};

/// Two-sided Welch t-test p-value; nullopt when either group has fewer than
/// two values or both variances are zero.
std::optional<double> welch_t_test(std::span<const double> a, std::span<const double> b);

std::vector<FeatureGroupStats> group_summary(const FeatureMatrix& m);

nlohmann::json to_json(const CvReport& r);
nlohmann::json to_json(const GridResult& g, std::span<const ClassifierSpec> grid);
std::string group_summary_csv(const std::vector<FeatureGroupStats>& s);

}  // namespace eegdep
