#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eegdep/classify.hpp"
#include "eegdep/eval.hpp"
#include "eegdep/features_linear.hpp"
#include "eegdep/features_nonlinear.hpp"
#include "eegdep/preprocess.hpp"
#include "eegdep/signal.hpp"
#include "eegdep/synth.hpp"

namespace eegdep {

inline constexpr const char* kToolVersion = "0.1.0";

/// Raised for bad user input (flags, config, manifest); maps to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-channel feature kinds, in canonical column order.
enum class FeatureKind { kCd, kRenyi, kC0, kPowMax, kPowMean, kPowCenter };

std::string feature_suffix(FeatureKind k);  // "cd", "renyi", "c0", "pow_max", ...
FeatureKind parse_feature_kind(const std::string& s);

/// "paper-knn-12" -> cd, renyi, c0, pow_max; "paper-svm-18" -> all six;
/// otherwise a comma-separated list of suffixes.
std::vector<FeatureKind> resolve_feature_set(const std::string& selector);

/// Channel-major names: every kind for the first channel, then the next.
std::vector<std::string> feature_columns(const std::vector<std::string>& channels,
                                         const std::vector<FeatureKind>& kinds);

struct PipelineConfig {
  bool filter_enabled = true;
  FilterSpec filter;
  bool ocular_enabled = true;
  OcularConfig ocular;
  WelchConfig welch;
  double band_lo = 1.0;
  double band_hi = 40.0;
  CenterMode center = CenterMode::kCentroid;
  EmbeddingConfig embedding;
  RenyiConfig renyi;
  std::string feature_set = "paper-knn-12";
  std::string preset = "paper-knn";
  NormalizeMode normalize = NormalizeMode::kPerFold;
  std::uint64_t seed = 20240611;
  CohortSpec cohort;

  /// Flat "section.key" -> value map, sorted by key.
  std::map<std::string, std::string> to_map() const;
  static PipelineConfig from_map(const std::map<std::string, std::string>& kv);
  /// "key = value" lines, one per key in sorted order.
  std::string serialize() const;
  static PipelineConfig parse(const std::string& text);
  static PipelineConfig load(const std::filesystem::path& path);
  std::string hash() const;  // FNV-1a 64 of serialize(), hex
  void validate() const;
};

// ---------------------------------------------------------------------------
// Manifest and recording files

struct ManifestEntry {
  std::string subject_id;
  std::optional<Label> label;  // nullopt = unknown
  std::string file;            // relative to the manifest directory
  double fs = 250.0;
};

struct Manifest {
  int version = 1;
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  /// Parses and validates (unique ids, files exist). Throws ValidationError.
  static Manifest load(const std::filesystem::path& path);
};

/// Header row of channel names, one row per sample, shortest round-trip numbers.
std::string recording_csv(const Recording& r);
Recording read_recording_csv(const std::filesystem::path& path, const std::string& subject_id,
                             std::optional<Label> label, double fs);

/// Writes subject CSVs, manifest.json and synth_config.conf into dir.
Manifest write_cohort(const std::vector<Recording>& cohort, const std::filesystem::path& dir,
                      const PipelineConfig& cfg);

// ---------------------------------------------------------------------------
// Feature extraction

/// Applies the configured filter and ocular stages to one channel.
TimeSeries preprocess_channel(const TimeSeries& x, const PipelineConfig& cfg);

/// Feature values for one preprocessed channel, in `kinds` order.
std::vector<double> channel_features(const TimeSeries& x, const std::vector<FeatureKind>& kinds,
                                     const PipelineConfig& cfg);

struct ExtractResult {
  std::vector<std::string> subject_ids;
  std::vector<std::optional<Label>> labels;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> skipped;  // "subject: reason"
};

/// Processes every manifest entry (up to `jobs` in parallel) and returns rows
/// sorted by subject id. Subjects that fail are listed in `skipped`.
ExtractResult extract_features(const Manifest& manifest, const PipelineConfig& cfg, std::size_t jobs = 1);

/// subject_id,label,<features...>; labels "depressed" | "control" | "unknown".
std::string feature_csv(const ExtractResult& r);
ExtractResult read_feature_csv(const std::filesystem::path& path);

/// Throws ValidationError if any row is unlabeled.
FeatureMatrix to_feature_matrix(const ExtractResult& r);

nlohmann::json run_metadata(const std::string& command, const PipelineConfig& cfg);

/// Fixed-width Acc / Sen / Spe table for a report.
std::string summary_table(const CvReport& r);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace eegdep
