// eegdep: batch front end for the screening pipeline.
//
//   eegdep synth    --out DIR                 synthetic cohort + manifest
//   eegdep extract  --manifest M --out F.csv  feature matrix
//   eegdep classify --features F.csv --out R  grid search + LOOCV report
//   eegdep pipeline --out DIR                 all three chained
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage/validation error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eegdep/pipeline.hpp"

namespace fs = std::filesystem;
using namespace eegdep;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> feature_set;
  std::optional<std::string> preset;
  std::optional<std::string> normalize;
  std::optional<double> effect;
  std::size_t jobs = 1;
  bool strict = false;
};

PipelineConfig resolve_config(const CommonOpts& o) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : PipelineConfig::load(o.config);
  auto kv = cfg.to_map();
  if (o.seed) kv["seed"] = std::to_string(*o.seed);
  if (o.feature_set) kv["features.set"] = *o.feature_set;
  if (o.preset) kv["classify.preset"] = *o.preset;
  if (o.normalize) kv["classify.normalize"] = *o.normalize;
  if (o.effect) kv["synth.effect"] = std::to_string(*o.effect);
  return PipelineConfig::from_map(kv);
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ValidationError("cannot create output directory '" + dir.string() + "'");
  }
  const fs::path probe = dir / ".eegdep-write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw ValidationError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

void check_parent_writable(const fs::path& file) {
  const fs::path parent = file.has_parent_path() ? file.parent_path() : fs::path(".");
  if (!fs::is_directory(parent)) throw ValidationError("output directory '" + parent.string() + "' does not exist");
}

Manifest do_synth(const PipelineConfig& cfg, const fs::path& dir) {
  prepare_output_dir(dir);
  const auto cohort = synth_cohort(cfg.cohort);
  auto m = write_cohort(cohort, dir, cfg);
  std::cerr << "synth: wrote " << cohort.size() << " recordings and manifest.json to " << dir.string() << "\n";
  return m;
}

int do_extract(const PipelineConfig& cfg, const Manifest& manifest, const fs::path& out, std::size_t jobs,
               bool strict) {
  if (manifest.entries.empty()) throw ValidationError("manifest has no entries");
  check_parent_writable(out);
  const auto r = extract_features(manifest, cfg, jobs);
  for (const auto& s : r.skipped) std::cerr << (strict ? "error" : "warning") << ": skipped " << s << "\n";
  if (r.rows.empty()) {
    std::cerr << "extract: no subject produced features\n";
    return kExitRuntime;
  }
  write_text_file(out, feature_csv(r));
  auto meta = run_metadata("extract", cfg);
  meta["subjects"] = r.subject_ids.size();
  meta["skipped"] = r.skipped;
  meta["columns"] = r.columns;
  write_text_file(fs::path(out.string() + ".run.json"), meta.dump(2) + "\n");
  std::cerr << "extract: " << r.rows.size() << " subjects x " << r.columns.size() << " features -> "
            << out.string() << "\n";
  return (strict && !r.skipped.empty()) ? kExitRuntime : 0;
}

int do_classify(const PipelineConfig& cfg, const fs::path& features, const fs::path& out,
                const std::optional<fs::path>& groups_out, std::size_t jobs) {
  check_parent_writable(out);
  const auto matrix = to_feature_matrix(read_feature_csv(features));
  if (matrix.count(Label::kDepressed) == 0 || matrix.count(Label::kControl) == 0) {
    throw ValidationError("feature matrix must contain both depressed and control subjects");
  }
  const auto grid = preset_grid(cfg.preset);
  const auto result = grid_search(matrix, grid, cfg.normalize, jobs);

  auto j = to_json(result, grid);
  j["preset"] = cfg.preset;
  j["run"] = run_metadata("classify", cfg);
  write_text_file(out, j.dump(2) + "\n");

  fs::path groups = groups_out.value_or(out.parent_path() / (out.stem().string() + "_groups.csv"));
  write_text_file(groups, group_summary_csv(group_summary(matrix)));

  std::cout << summary_table(result.report);
  for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "Key-value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Seed for every random draw");
  cmd->add_option("--jobs", o.jobs, "Parallel workers")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG depression-screening feature and classification pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonOpts opts;
  std::string out;
  std::string manifest_path;
  std::string features_path;
  std::string groups_path;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled cohort");
  add_common(synth, opts);
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--effect", opts.effect, "Depressed-group shift in between-subject SD");

  auto* extract = app.add_subcommand("extract", "Preprocess recordings and write the feature matrix");
  add_common(extract, opts);
  extract->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  extract->add_option("--out", out, "Feature CSV to write")->required();
  extract->add_option("--feature-set", opts.feature_set, "paper-knn-12 | paper-svm-18 | comma list");
  extract->add_flag("--strict", opts.strict, "Fail if any subject is skipped");

  auto* classify = app.add_subcommand("classify", "Grid search + leave-one-out evaluation");
  add_common(classify, opts);
  classify->add_option("--features", features_path, "Feature CSV")->required()->check(CLI::ExistingFile);
  classify->add_option("--out", out, "Report JSON to write")->required();
  classify->add_option("--groups", groups_path, "Group-summary CSV (default: <out>_groups.csv)");
  classify->add_option("--preset", opts.preset, "paper-knn | paper-svm | svm-linear | logreg");
  classify->add_option("--normalize", opts.normalize, "fold | global")->check(CLI::IsMember({"fold", "global"}));

  auto* pipeline = app.add_subcommand("pipeline", "synth, extract and classify in one run");
  add_common(pipeline, opts);
  pipeline->add_option("--out", out, "Output directory")->required();
  pipeline->add_option("--feature-set", opts.feature_set, "paper-knn-12 | paper-svm-18 | comma list");
  pipeline->add_option("--preset", opts.preset, "paper-knn | paper-svm | svm-linear | logreg");
  pipeline->add_option("--normalize", opts.normalize, "fold | global")->check(CLI::IsMember({"fold", "global"}));
  pipeline->add_option("--effect", opts.effect, "Depressed-group shift in between-subject SD");
  pipeline->add_flag("--strict", opts.strict, "Fail if any subject is skipped");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  return guarded([&]() -> int {
    const auto cfg = resolve_config(opts);
    if (synth->parsed()) {
      do_synth(cfg, out);
      return 0;
    }
    if (extract->parsed()) {
      return do_extract(cfg, Manifest::load(manifest_path), out, opts.jobs, opts.strict);
    }
    if (classify->parsed()) {
      std::optional<fs::path> groups;
      if (!groups_path.empty()) groups = groups_path;
      return do_classify(cfg, features_path, out, groups, opts.jobs);
    }
    const fs::path dir(out);
    prepare_output_dir(dir);
    do_synth(cfg, dir / "recordings");
    const int rc = do_extract(cfg, Manifest::load(dir / "recordings" / "manifest.json"), dir / "features.csv",
                              opts.jobs, opts.strict);
    if (rc != 0) return rc;
    const int rc2 = do_classify(cfg, dir / "features.csv", dir / "report.json", dir / "groups.csv", opts.jobs);
    write_text_file(dir / "run.json", run_metadata("pipeline", cfg).dump(2) + "\n");
    return rc2;
  });
}
