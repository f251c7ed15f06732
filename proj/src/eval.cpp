#include "eegdep/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "eegdep/format.hpp"
#include "eegdep/parallel.hpp"

namespace eegdep {

NormalizeMode parse_normalize_mode(const std::string& s) {
  if (s == "fold") return NormalizeMode::kPerFold;
  if (s == "global") return NormalizeMode::kGlobal;
  throw std::invalid_argument("unknown normalize mode '" + s + "' (expected fold|global)");
}

std::string normalize_mode_name(NormalizeMode m) { return m == NormalizeMode::kPerFold ? "fold" : "global"; }

std::string classifier_name(const ClassifierSpec& spec) {
  switch (spec.index()) {
    case 0: return "knn";
    case 1: return "svm";
    default: return "logreg";
  }
}

nlohmann::json describe(const ClassifierSpec& spec) {
  if (const auto* k = std::get_if<KnnConfig>(&spec)) return {{"classifier", "knn"}, {"k", k->k}};
  if (const auto* s = std::get_if<SvmParams>(&spec)) {
    return {{"classifier", "svm"}, {"kernel", to_json(s->kernel)}, {"c", s->c}, {"tol", s->tol}};
  }
  const auto& l = std::get<LogregParams>(spec);
  return {{"classifier", "logreg"}, {"l2", l.l2}, {"grad_tol", l.grad_tol}, {"max_iters", l.max_iters}};
}

std::vector<std::string> preset_names() { return {"paper-knn", "paper-svm", "svm-linear", "logreg"}; }

std::vector<ClassifierSpec> preset_grid(const std::string& name) {
  std::vector<ClassifierSpec> grid;
  if (name == "paper-knn") {
    for (std::size_t k = 1; k <= 18; ++k) grid.emplace_back(KnnConfig{k});
  } else if (name == "paper-svm") {
    SvmParams p;
    p.kernel = KernelSpec{KernelKind::kRbf, std::ldexp(1.0, -6)};
    p.c = 2.0;
    grid.emplace_back(p);
  } else if (name == "svm-linear") {
    SvmParams p;
    p.kernel = KernelSpec{KernelKind::kLinear, 0.0};
    p.c = 2.0;
    grid.emplace_back(p);
  } else if (name == "logreg") {
    grid.emplace_back(LogregParams{});
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return grid;
}

std::vector<Label> fit_predict(const FeatureMatrix& train, const FeatureMatrix& queries,
                               const ClassifierSpec& spec) {
  std::vector<Label> out;
  out.reserve(queries.rows());
  if (const auto* k = std::get_if<KnnConfig>(&spec)) {
    for (std::size_t i = 0; i < queries.rows(); ++i) out.push_back(knn_predict(train, queries.row(i), *k));
  } else if (const auto* s = std::get_if<SvmParams>(&spec)) {
    const auto model = svm_train(train, *s);
    for (std::size_t i = 0; i < queries.rows(); ++i) out.push_back(svm_predict(model, queries.row(i)));
  } else {
    const auto model = logreg_train(train, std::get<LogregParams>(spec));
    for (std::size_t i = 0; i < queries.rows(); ++i) out.push_back(logreg_predict(model, queries.row(i)));
  }
  return out;
}

void Confusion::add(Label truth, Label predicted) {
  if (truth == Label::kDepressed) {
    (predicted == Label::kDepressed ? tp : fn) += 1;
  } else {
    (predicted == Label::kControl ? tn : fp) += 1;
  }
}

Metrics metrics(const Confusion& c) {
  Metrics m;
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.sensitivity = ratio(c.tp, c.tp + c.fn);
  m.specificity = ratio(c.tn, c.tn + c.fp);
  return m;
}

CvReport loocv(const FeatureMatrix& m, const ClassifierSpec& spec, NormalizeMode mode, std::size_t jobs) {
  if (m.rows() < 2) throw std::invalid_argument("loocv: need at least 2 rows");
  if (m.count(Label::kDepressed) == 0 || m.count(Label::kControl) == 0) {
    throw std::invalid_argument("loocv: both classes must be present");
  }

  CvReport report;
  report.classifier = classifier_name(spec);
  report.best_params = describe(spec);
  report.feature_set = m.feature_names();
  report.normalize = mode;

  FeatureMatrix data = m;
  if (mode == NormalizeMode::kGlobal) data = zscore_apply(m, zscore_fit(m), &report.warnings);

  std::vector<FoldResult> folds(m.rows());
  parallel_for(m.rows(), jobs, [&](std::size_t i) {
    FoldResult& f = folds[i];
    f.subject_id = m.subject_ids()[i];
    f.truth = m.label(i);
    FeatureMatrix train = data.without_row(i);
    if (train.count(Label::kDepressed) == 0 || train.count(Label::kControl) == 0) {
      f.failure = "training split holds a single class";
      return;
    }
    const std::size_t held[] = {i};
    FeatureMatrix query = data.select_rows(held);
    if (mode == NormalizeMode::kPerFold) {
      const auto params = zscore_fit(train);
      train = zscore_apply(train, params);
      query = zscore_apply(query, params);
      f.scaler = params;
    }
    f.predicted = fit_predict(train, query, spec).front();
  });

  for (const auto& f : folds) {
    if (f.predicted) {
      report.confusion.add(f.truth, *f.predicted);
    } else {
      ++report.failed_folds;
      report.warnings.push_back("fold '" + f.subject_id + "' failed: " + f.failure);
    }
  }
  report.per_fold = std::move(folds);
  report.scores = metrics(report.confusion);
  return report;
}

GridResult grid_search(const FeatureMatrix& m, std::span<const ClassifierSpec> grid, NormalizeMode mode,
                       std::size_t jobs) {
  if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
  GridResult result;
  double best = -1.0;
  bool any = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    // k larger than a leave-one-out training split cannot be evaluated
    if (const auto* knn = std::get_if<KnnConfig>(&grid[g]); knn && knn->k + 1 > m.rows()) {
      result.accuracies.push_back(std::nullopt);
      continue;
    }
    auto rep = loocv(m, grid[g], mode, jobs);
    result.accuracies.push_back(rep.scores.accuracy);
    const double acc = rep.scores.accuracy.value_or(-1.0);
    if (!any || acc > best) {
      any = true;
      best = acc;
      result.best_index = g;
      result.best = grid[g];
      result.report = std::move(rep);
    }
  }
  if (!any) throw std::invalid_argument("grid_search: no grid entry fits " + std::to_string(m.rows()) + " rows");
  return result;
}

// ---------------------------------------------------------------------------

std::optional<double> welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  auto mean_var = [](std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, ss / static_cast<double>(v.size() - 1)};
  };
  const auto [ma, va] = mean_var(a);
  const auto [mb, vb] = mean_var(b);
  const double sa = va / static_cast<double>(a.size());
  const double sb = vb / static_cast<double>(b.size());
  const double se2 = sa + sb;
  if (!(se2 > 0.0)) return std::nullopt;
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (sa * sa / static_cast<double>(a.size() - 1) + sb * sb / static_cast<double>(b.size() - 1));
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

std::vector<FeatureGroupStats> group_summary(const FeatureMatrix& m) {
  if (m.count(Label::kDepressed) == 0 || m.count(Label::kControl) == 0) {
    throw std::invalid_argument("group_summary: both classes must be present");
  }
  std::vector<FeatureGroupStats> out;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::vector<double> dep;
    std::vector<double> ctl;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      (m.label(r) == Label::kDepressed ? dep : ctl).push_back(m.at(r, c));
    }
    FeatureGroupStats s;
    s.feature = m.feature_names()[c];
    s.n_depressed = dep.size();
    s.n_control = ctl.size();
    for (double v : dep) s.mean_depressed += v;
    for (double v : ctl) s.mean_control += v;
    s.mean_depressed /= static_cast<double>(dep.size());
    s.mean_control /= static_cast<double>(ctl.size());
    if (s.mean_control != 0.0) {
      s.relative_diff_pct = 100.0 * (s.mean_depressed - s.mean_control) / s.mean_control;
    }
    s.welch_t_p = welch_t_test(dep, ctl);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const CvReport& r) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.per_fold) {
    nlohmann::json j = {{"subject_id", f.subject_id}, {"true", label_name(f.truth)}};
    j["predicted"] = f.predicted ? nlohmann::json(label_name(*f.predicted)) : nlohmann::json(nullptr);
    if (!f.failure.empty()) j["failure"] = f.failure;
    folds.push_back(std::move(j));
  }
  return {{"classifier", r.classifier},
          {"normalize", normalize_mode_name(r.normalize)},
          {"feature_set", r.feature_set},
          {"best_params", r.best_params},
          {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn}, {"fn", r.confusion.fn}}},
          {"accuracy", optional_json(r.scores.accuracy)},
          {"sensitivity", optional_json(r.scores.sensitivity)},
          {"specificity", optional_json(r.scores.specificity)},
          {"failed_folds", r.failed_folds},
          {"warnings", r.warnings},
          {"per_fold", folds}};
}

nlohmann::json to_json(const GridResult& g, std::span<const ClassifierSpec> grid) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.size() && i < g.accuracies.size(); ++i) {
    entries.push_back({{"params", describe(grid[i])}, {"accuracy", optional_json(g.accuracies[i])}});
  }
  auto j = to_json(g.report);
  j["grid"] = entries;
  j["best_index"] = g.best_index;
  return j;
}

std::string group_summary_csv(const std::vector<FeatureGroupStats>& s) {
  std::ostringstream os;
  os << "feature,n_depressed,n_control,mean_depressed,mean_control,relative_diff_pct,welch_t_p\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
  for (const auto& f : s) {
    os << f.feature << ',' << f.n_depressed << ',' << f.n_control << ',' << format_double(f.mean_depressed) << ','
       << format_double(f.mean_control) << ',' << opt(f.relative_diff_pct) << ',' << opt(f.welch_t_p) << '\n';
  }
  return os.str();
}

}  // namespace eegdep
