#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace eegdep {

/// Depressed is the positive class throughout.
enum class Label { kControl = 0, kDepressed = 1 };

std::string label_name(Label l);
Label parse_label(const std::string& s);  // "depressed" | "control"

/// Subjects x named features with binary labels. Values are row-major.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> subject_ids, std::vector<std::string> feature_names,
                std::vector<double> values, std::vector<Label> labels);

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return feature_names_.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * cols(), cols());
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  Label label(std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& subject_ids() const noexcept { return subject_ids_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::size_t count(Label l) const;
  FeatureMatrix select_rows(std::span<const std::size_t> idx) const;
  FeatureMatrix without_row(std::size_t i) const;
  FeatureMatrix select_columns(std::span<const std::string> names) const;

 private:
  std::vector<std::string> subject_ids_;
  std::vector<std::string> feature_names_;
  std::vector<double> values_;
  std::vector<Label> labels_;
};

// ---------------------------------------------------------------------------
// z-score normalization

struct ScalerParams {
  std::vector<double> means;
  std::vector<double> stds;  // sample standard deviation (n - 1)
  std::vector<std::size_t> degenerate_columns() const;
};

ScalerParams zscore_fit(const FeatureMatrix& m);

/// Columns with zero std map to 0; their names are appended to `warnings`.
FeatureMatrix zscore_apply(const FeatureMatrix& m, const ScalerParams& p,
                           std::vector<std::string>* warnings = nullptr);
std::vector<double> zscore_apply_row(std::span<const double> row, const ScalerParams& p);

// ---------------------------------------------------------------------------
// k nearest neighbours

struct KnnConfig {
  std::size_t k = 17;
};

/// Majority vote among the k Euclidean-nearest rows (distance ties by row
/// order). Vote ties go to the class with the smaller summed neighbour
/// distance, then to depressed.
Label knn_predict(const FeatureMatrix& train, std::span<const double> query, const KnnConfig& cfg);

// ---------------------------------------------------------------------------
// Soft-margin SVM

enum class KernelKind { kLinear, kRbf };

struct KernelSpec {
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0 / 64.0;

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

struct SvmParams {
  KernelSpec kernel;
  double c = 2.0;
  double tol = 1e-3;
  std::size_t max_iter = 1'000'000;
};

struct SvmModel {
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> alphas;  // in (0, C]
  std::vector<int> signs;      // +1 depressed, -1 control
  double bias = 0.0;
  KernelSpec kernel;
  double c = 0.0;
  std::size_t iterations = 0;

  double decision_value(std::span<const double> query) const;
};

/// Sequential minimal optimization on the dual. Each step takes the maximal
/// KKT-violating pair (lowest index on ties) and stops when the violation gap
/// drops below params.tol. The full kernel matrix is cached.
SvmModel svm_train(const FeatureMatrix& m, const SvmParams& params);

/// Sign of the decision value; exactly zero maps to depressed.
Label svm_predict(const SvmModel& model, std::span<const double> query);

// ---------------------------------------------------------------------------
// Logistic regression

struct LogregParams {
  std::size_t max_iters = 200;
  double grad_tol = 1e-8;
  double l2 = 1e-4;
};

struct LogregModel {
  std::vector<double> weights;
  double bias = 0.0;
  double l2 = 1e-4;
  std::size_t iterations = 0;
};

/// Mean negative log-likelihood plus (l2 / 2) * |w|^2; the bias is not penalized.
double logreg_objective(const FeatureMatrix& m, std::span<const double> weights, double bias, double l2);

/// Gradient of logreg_objective; the last entry is d/d bias.
std::vector<double> logreg_gradient(const FeatureMatrix& m, std::span<const double> weights, double bias,
                                    double l2);

/// Damped Newton iterations until the gradient norm falls below grad_tol.
LogregModel logreg_train(const FeatureMatrix& m, const LogregParams& params = {});

double logreg_probability(const LogregModel& model, std::span<const double> query);

/// probability >= 0.5 maps to depressed.
Label logreg_predict(const LogregModel& model, std::span<const double> query);

// ---------------------------------------------------------------------------
// JSON forms

nlohmann::json to_json(const ScalerParams& p);
nlohmann::json to_json(const KernelSpec& k);
nlohmann::json to_json(const SvmModel& m);
nlohmann::json to_json(const LogregModel& m);
ScalerParams scaler_from_json(const nlohmann::json& j);
SvmModel svm_from_json(const nlohmann::json& j);
LogregModel logreg_from_json(const nlohmann::json& j);

}  // namespace eegdep
