#include "eegdep/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "eegdep/errors.hpp"

namespace eegdep {

std::string label_name(Label l) { return l == Label::kDepressed ? "depressed" : "control"; }

Label parse_label(const std::string& s) {
  if (s == "depressed") return Label::kDepressed;
  if (s == "control") return Label::kControl;
  throw std::invalid_argument("unknown label '" + s + "' (expected depressed|control)");
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> subject_ids, std::vector<std::string> feature_names,
                             std::vector<double> values, std::vector<Label> labels)
    : subject_ids_(std::move(subject_ids)),
      feature_names_(std::move(feature_names)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  if (subject_ids_.size() != labels_.size()) {
    throw std::invalid_argument("FeatureMatrix: subject id count must equal label count");
  }
  if (values_.size() != labels_.size() * feature_names_.size()) {
    throw std::invalid_argument("FeatureMatrix: value count must equal rows * cols");
  }
  if (std::set<std::string>(feature_names_.begin(), feature_names_.end()).size() != feature_names_.size()) {
    throw std::invalid_argument("FeatureMatrix: feature names must be unique");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("FeatureMatrix: values must be finite");
  }
}

std::size_t FeatureMatrix::count(Label l) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> idx) const {
  std::vector<std::string> ids;
  std::vector<double> vals;
  std::vector<Label> labs;
  for (std::size_t i : idx) {
    if (i >= rows()) throw std::out_of_range("FeatureMatrix::select_rows: index out of range");
    ids.push_back(subject_ids_[i]);
    const auto r = row(i);
    vals.insert(vals.end(), r.begin(), r.end());
    labs.push_back(labels_[i]);
  }
  return FeatureMatrix(std::move(ids), feature_names_, std::move(vals), std::move(labs));
}

FeatureMatrix FeatureMatrix::without_row(std::size_t i) const {
  std::vector<std::size_t> idx;
  for (std::size_t r = 0; r < rows(); ++r) {
    if (r != i) idx.push_back(r);
  }
  return select_rows(idx);
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::string> names) const {
  std::vector<std::size_t> cols_idx;
  for (const auto& n : names) {
    const auto it = std::find(feature_names_.begin(), feature_names_.end(), n);
    if (it == feature_names_.end()) throw std::invalid_argument("FeatureMatrix: no column named '" + n + "'");
    cols_idx.push_back(static_cast<std::size_t>(it - feature_names_.begin()));
  }
  std::vector<double> vals;
  vals.reserve(rows() * cols_idx.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c : cols_idx) vals.push_back(at(r, c));
  }
  return FeatureMatrix(subject_ids_, std::vector<std::string>(names.begin(), names.end()), std::move(vals),
                       labels_);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> ScalerParams::degenerate_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < stds.size(); ++c) {
    if (!(stds[c] > 0.0)) out.push_back(c);
  }
  return out;
}

ScalerParams zscore_fit(const FeatureMatrix& m) {
  if (m.rows() < 2) throw std::invalid_argument("zscore_fit: need at least 2 rows");
  const std::size_t n = m.rows();
  ScalerParams p;
  p.means.assign(m.cols(), 0.0);
  p.stds.assign(m.cols(), 0.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += m.at(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (m.at(r, c) - mean) * (m.at(r, c) - mean);
    p.means[c] = mean;
    p.stds[c] = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return p;
}

std::vector<double> zscore_apply_row(std::span<const double> row, const ScalerParams& p) {
  if (row.size() != p.means.size() || p.means.size() != p.stds.size()) {
    throw std::invalid_argument("zscore_apply: column count does not match scaler parameters");
  }
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    out[c] = p.stds[c] > 0.0 ? (row[c] - p.means[c]) / p.stds[c] : 0.0;
  }
  return out;
}

FeatureMatrix zscore_apply(const FeatureMatrix& m, const ScalerParams& p, std::vector<std::string>* warnings) {
  if (m.cols() != p.means.size() || p.means.size() != p.stds.size()) {
    throw std::invalid_argument("zscore_apply: column count does not match scaler parameters");
  }
  std::vector<double> vals;
  vals.reserve(m.values().size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto z = zscore_apply_row(m.row(r), p);
    vals.insert(vals.end(), z.begin(), z.end());
  }
  if (warnings) {
    for (std::size_t c : p.degenerate_columns()) {
      warnings->push_back("feature '" + m.feature_names()[c] + "' has zero standard deviation; mapped to 0");
    }
  }
  return FeatureMatrix(m.subject_ids(), m.feature_names(), std::move(vals), m.labels());
}

// ---------------------------------------------------------------------------

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

Label knn_predict(const FeatureMatrix& train, std::span<const double> query, const KnnConfig& cfg) {
  if (train.rows() == 0) throw std::invalid_argument("knn_predict: empty training set");
  if (cfg.k < 1 || cfg.k > train.rows()) {
    throw std::invalid_argument("knn_predict: k must be in [1, training rows]");
  }
  if (query.size() != train.cols()) throw std::invalid_argument("knn_predict: query dimension mismatch");

  std::vector<std::pair<double, std::size_t>> d(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) d[i] = {std::sqrt(sq_distance(train.row(i), query)), i};
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(cfg.k), d.end());

  std::size_t votes_dep = 0;
  std::size_t votes_ctl = 0;
  double dist_dep = 0.0;
  double dist_ctl = 0.0;
  for (std::size_t i = 0; i < cfg.k; ++i) {
    if (train.label(d[i].second) == Label::kDepressed) {
      ++votes_dep;
      dist_dep += d[i].first;
    } else {
      ++votes_ctl;
      dist_ctl += d[i].first;
    }
  }
  if (votes_dep != votes_ctl) return votes_dep > votes_ctl ? Label::kDepressed : Label::kControl;
  if (dist_dep != dist_ctl) return dist_dep < dist_ctl ? Label::kDepressed : Label::kControl;
  return Label::kDepressed;
}

// ---------------------------------------------------------------------------

double KernelSpec::operator()(std::span<const double> a, std::span<const double> b) const {
  if (kind == KernelKind::kLinear) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  return std::exp(-gamma * sq_distance(a, b));
}

double SvmModel::decision_value(std::span<const double> query) const {
  if (!support_vectors.empty() && query.size() != support_vectors.front().size()) {
    throw std::invalid_argument("svm_predict: query dimension mismatch");
  }
  double f = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    f += alphas[i] * signs[i] * kernel(support_vectors[i], query);
  }
  return f;
}

Label svm_predict(const SvmModel& model, std::span<const double> query) {
  return model.decision_value(query) >= 0.0 ? Label::kDepressed : Label::kControl;
}

SvmModel svm_train(const FeatureMatrix& m, const SvmParams& params) {
  if (!(params.c > 0.0)) throw std::invalid_argument("svm_train: C must be > 0");
  if (params.kernel.kind == KernelKind::kRbf && !(params.kernel.gamma > 0.0)) {
    throw std::invalid_argument("svm_train: gamma must be > 0 for the rbf kernel");
  }
  if (m.count(Label::kDepressed) == 0 || m.count(Label::kControl) == 0) {
    throw std::invalid_argument("svm_train: both classes must be present");
  }

  const std::size_t n = m.rows();
  const double c = params.c;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = m.label(i) == Label::kDepressed ? 1.0 : -1.0;

  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = y[i] * y[j] * params.kernel(m.row(i), m.row(j));
      q[i * n + j] = v;
      q[j * n + i] = v;
    }
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // Q alpha - 1
  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c); };
  constexpr double kTau = 1e-12;

  std::size_t iter = 0;
  for (;; ++iter) {
    std::size_t i = n;
    std::size_t j = n;
    double gmax = -HUGE_VAL;
    double gmin = HUGE_VAL;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin < params.tol) break;
    if (iter >= params.max_iter) throw TrainingFailed("svm_train: SMO did not converge", iter);

    const double* qi = &q[i * n];
    const double* qj = &q[j * n];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = qi[i] + qj[j] + 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = qi[i] + qj[j] - 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * di + qj[t] * dj;
  }

  // Offset from free multipliers, or the midpoint of the feasible interval.
  double ub = HUGE_VAL;
  double lb = -HUGE_VAL;
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  SvmModel model;
  model.kernel = params.kernel;
  model.c = c;
  model.bias = -rho;
  model.iterations = iter;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      const auto r = m.row(t);
      model.support_vectors.emplace_back(r.begin(), r.end());
      model.alphas.push_back(alpha[t]);
      model.signs.push_back(y[t] > 0 ? 1 : -1);
    }
  }
  return model;
}

// ---------------------------------------------------------------------------

namespace {

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// log(1 + exp(s)) without overflow
double softplus(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

double score(std::span<const double> x, std::span<const double> w, double b) {
  double s = b;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

void check_dims(const FeatureMatrix& m, std::span<const double> w) {
  if (w.size() != m.cols()) throw std::invalid_argument("logreg: weight count does not match feature count");
}

// Solves a x = b in place (partial pivoting). Returns false if singular.
bool solve_linear(std::vector<double> a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (!(std::abs(a[piv * n + col]) > 0.0)) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * b[k];
    b[r] = s / a[r * n + r];
  }
  return true;
}

}  // namespace

double logreg_objective(const FeatureMatrix& m, std::span<const double> weights, double bias, double l2) {
  check_dims(m, weights);
  double nll = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double s = score(m.row(r), weights, bias);
    const double yv = m.label(r) == Label::kDepressed ? 1.0 : 0.0;
    nll += softplus(s) - yv * s;
  }
  double w2 = 0.0;
  for (double w : weights) w2 += w * w;
  return nll / static_cast<double>(m.rows()) + 0.5 * l2 * w2;
}

std::vector<double> logreg_gradient(const FeatureMatrix& m, std::span<const double> weights, double bias,
                                    double l2) {
  check_dims(m, weights);
  const std::size_t d = m.cols();
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto x = m.row(r);
    const double yv = m.label(r) == Label::kDepressed ? 1.0 : 0.0;
    const double e = sigmoid(score(x, weights, bias)) - yv;
    for (std::size_t c = 0; c < d; ++c) g[c] += e * x[c];
    g[d] += e;
  }
  const double inv_n = 1.0 / static_cast<double>(m.rows());
  for (auto& v : g) v *= inv_n;
  for (std::size_t c = 0; c < d; ++c) g[c] += l2 * weights[c];
  return g;
}

LogregModel logreg_train(const FeatureMatrix& m, const LogregParams& params) {
  if (m.count(Label::kDepressed) == 0 || m.count(Label::kControl) == 0) {
    throw std::invalid_argument("logreg_train: both classes must be present");
  }
  const std::size_t d = m.cols();
  const std::size_t p = d + 1;
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(m.rows());

  for (std::size_t iter = 0;; ++iter) {
    auto g = logreg_gradient(m, w, b, params.l2);
    double gnorm = 0.0;
    for (double v : g) gnorm += v * v;
    gnorm = std::sqrt(gnorm);
    if (gnorm < params.grad_tol) return LogregModel{w, b, params.l2, iter};
    if (iter >= params.max_iters) throw TrainingFailed("logreg_train: gradient norm did not converge", iter);

    std::vector<double> h(p * p, 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto x = m.row(r);
      const double s = sigmoid(score(x, w, b));
      const double wt = s * (1.0 - s) * inv_n;
      for (std::size_t i = 0; i < p; ++i) {
        const double xi = i < d ? x[i] : 1.0;
        for (std::size_t j = 0; j < p; ++j) h[i * p + j] += wt * xi * (j < d ? x[j] : 1.0);
      }
    }
    for (std::size_t i = 0; i < d; ++i) h[i * p + i] += params.l2;

    std::vector<double> step = g;
    if (!solve_linear(h, step)) step = g;  // fall back to steepest descent

    double dir_dot = 0.0;
    for (std::size_t i = 0; i < p; ++i) dir_dot += step[i] * g[i];
    if (!(dir_dot > 0.0)) {
      step = g;
      dir_dot = gnorm * gnorm;
    }

    const double f0 = logreg_objective(m, w, b, params.l2);
    double t = 1.0;
    std::vector<double> w_new(d);
    double b_new = b;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < d; ++i) w_new[i] = w[i] - t * step[i];
      b_new = b - t * step[d];
      if (logreg_objective(m, w_new, b_new, params.l2) <= f0 - 1e-4 * t * dir_dot) break;
      t *= 0.5;
    }
    w = w_new;
    b = b_new;
  }
}

double logreg_probability(const LogregModel& model, std::span<const double> query) {
  if (query.size() != model.weights.size()) throw std::invalid_argument("logreg_predict: query dimension mismatch");
  return sigmoid(score(query, model.weights, model.bias));
}

Label logreg_predict(const LogregModel& model, std::span<const double> query) {
  return logreg_probability(model, query) >= 0.5 ? Label::kDepressed : Label::kControl;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ScalerParams& p) { return {{"means", p.means}, {"stds", p.stds}}; }

nlohmann::json to_json(const KernelSpec& k) {
  if (k.kind == KernelKind::kLinear) return {{"type", "linear"}};
  return {{"type", "rbf"}, {"gamma", k.gamma}};
}

nlohmann::json to_json(const SvmModel& m) {
  return {{"model", "svm"},
          {"kernel", to_json(m.kernel)},
          {"c", m.c},
          {"bias", m.bias},
          {"alphas", m.alphas},
          {"signs", m.signs},
          {"support_vectors", m.support_vectors},
          {"iterations", m.iterations}};
}

nlohmann::json to_json(const LogregModel& m) {
  return {{"model", "logreg"}, {"weights", m.weights}, {"bias", m.bias}, {"l2", m.l2}, {"iterations", m.iterations}};
}

ScalerParams scaler_from_json(const nlohmann::json& j) {
  ScalerParams p;
  j.at("means").get_to(p.means);
  j.at("stds").get_to(p.stds);
  if (p.means.size() != p.stds.size()) throw std::invalid_argument("scaler JSON: means/stds length mismatch");
  return p;
}

SvmModel svm_from_json(const nlohmann::json& j) {
  SvmModel m;
  const auto& k = j.at("kernel");
  const auto type = k.at("type").get<std::string>();
  if (type == "linear") {
    m.kernel.kind = KernelKind::kLinear;
  } else if (type == "rbf") {
    m.kernel.kind = KernelKind::kRbf;
    m.kernel.gamma = k.at("gamma").get<double>();
  } else {
    throw std::invalid_argument("svm JSON: unknown kernel type '" + type + "'");
  }
  m.c = j.at("c").get<double>();
  m.bias = j.at("bias").get<double>();
  j.at("alphas").get_to(m.alphas);
  j.at("signs").get_to(m.signs);
  j.at("support_vectors").get_to(m.support_vectors);
  m.iterations = j.value("iterations", std::size_t{0});
  if (m.alphas.size() != m.signs.size() || m.alphas.size() != m.support_vectors.size()) {
    throw std::invalid_argument("svm JSON: alphas, signs and support_vectors must have equal length");
  }
  return m;
}

LogregModel logreg_from_json(const nlohmann::json& j) {
  LogregModel m;
  j.at("weights").get_to(m.weights);
  m.bias = j.at("bias").get<double>();
  m.l2 = j.value("l2", 1e-4);
  m.iterations = j.value("iterations", std::size_t{0});
  return m;
}

}  // namespace eegdep
