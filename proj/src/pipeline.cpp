#include "eegdep/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "eegdep/format.hpp"
#include "eegdep/parallel.hpp"

namespace fs = std::filesystem;

namespace eegdep {

std::string feature_suffix(FeatureKind k) {
  switch (k) {
    case FeatureKind::kCd: return "cd";
    case FeatureKind::kRenyi: return "renyi";
    case FeatureKind::kC0: return "c0";
    case FeatureKind::kPowMax: return "pow_max";
    case FeatureKind::kPowMean: return "pow_mean";
    case FeatureKind::kPowCenter: return "pow_center";
  }
  return "cd";
}

FeatureKind parse_feature_kind(const std::string& s) {
  for (auto k : {FeatureKind::kCd, FeatureKind::kRenyi, FeatureKind::kC0, FeatureKind::kPowMax,
                 FeatureKind::kPowMean, FeatureKind::kPowCenter}) {
    if (feature_suffix(k) == s) return k;
  }
  throw ValidationError("unknown feature '" + s + "' (expected cd|renyi|c0|pow_max|pow_mean|pow_center)");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<FeatureKind> resolve_feature_set(const std::string& selector) {
  using K = FeatureKind;
  if (selector == "paper-knn-12") return {K::kCd, K::kRenyi, K::kC0, K::kPowMax};
  if (selector == "paper-svm-18") return {K::kCd, K::kRenyi, K::kC0, K::kPowMax, K::kPowMean, K::kPowCenter};
  std::vector<FeatureKind> out;
  for (const auto& part : split(selector, ',')) {
    const auto k = parse_feature_kind(trim(part));
    if (std::find(out.begin(), out.end(), k) != out.end()) {
      throw ValidationError("feature '" + trim(part) + "' listed twice in feature set");
    }
    out.push_back(k);
  }
  if (out.empty()) throw ValidationError("feature set is empty");
  return out;
}

std::vector<std::string> feature_columns(const std::vector<std::string>& channels,
                                         const std::vector<FeatureKind>& kinds) {
  std::vector<std::string> out;
  for (const auto& ch : channels) {
    for (auto k : kinds) out.push_back(ch + "_" + feature_suffix(k));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config

namespace {

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string filter_kind_name(FilterKind k) {
  switch (k) {
    case FilterKind::kHighpass: return "highpass";
    case FilterKind::kLowpass: return "lowpass";
    case FilterKind::kBandpass: return "bandpass";
  }
  return "bandpass";
}

struct Parser {
  const std::string& key;
  const std::string& value;

  [[noreturn]] void fail(const std::string& expected) const {
    throw ValidationError("config key '" + key + "': invalid value '" + value + "' (expected " + expected + ")");
  }
  bool boolean() const {
    if (value == "true") return true;
    if (value == "false") return false;
    fail("true|false");
  }
  double real() const {
    try {
      return parse_double(value);
    } catch (const std::invalid_argument&) {
      fail("a number");
    }
  }
  std::uint64_t unsigned_int() const {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) fail("a nonnegative integer");
    try {
      return std::stoull(value);
    } catch (const std::exception&) {
      fail("a nonnegative integer");
    }
  }
  template <typename Fn>
  auto parsed(Fn&& fn, const std::string& expected) const {
    try {
      return fn(value);
    } catch (const std::invalid_argument&) {
      fail(expected);
    }
  }
};

}  // namespace

std::map<std::string, std::string> PipelineConfig::to_map() const {
  std::map<std::string, std::string> kv;
  kv["filter.enabled"] = bool_str(filter_enabled);
  kv["filter.kind"] = filter_kind_name(filter.kind);
  kv["filter.low_hz"] = format_double(filter.low_hz);
  kv["filter.high_hz"] = format_double(filter.high_hz);
  kv["filter.order"] = std::to_string(filter.order);
  kv["filter.zero_phase"] = bool_str(filter.zero_phase);
  kv["ocular.enabled"] = bool_str(ocular_enabled);
  kv["ocular.wavelet"] = wavelet_name(ocular.wavelet);
  kv["ocular.levels"] = std::to_string(ocular.levels);
  kv["ocular.process_var"] = format_double(ocular.process_var);
  kv["ocular.measurement_var"] = format_double(ocular.measurement_var);
  kv["welch.segment_len"] = std::to_string(welch.segment_len);
  kv["welch.overlap"] = format_double(welch.overlap);
  kv["welch.window"] = window_name(welch.window);
  kv["linear.band_lo"] = format_double(band_lo);
  kv["linear.band_hi"] = format_double(band_hi);
  kv["linear.center"] = center_mode_name(center);
  kv["embed.m"] = std::to_string(embedding.m);
  kv["embed.tau"] = std::to_string(embedding.tau);
  kv["embed.theiler"] = embedding.theiler_w ? std::to_string(*embedding.theiler_w) : "auto";
  kv["embed.max_points"] = std::to_string(embedding.max_points);
  kv["renyi.bins"] = std::to_string(renyi.k_bins);
  kv["renyi.alpha"] = format_double(renyi.alpha);
  kv["features.set"] = feature_set;
  kv["classify.preset"] = preset;
  kv["classify.normalize"] = normalize_mode_name(normalize);
  kv["seed"] = std::to_string(seed);
  kv["synth.n_depressed"] = std::to_string(cohort.n_depressed);
  kv["synth.n_control"] = std::to_string(cohort.n_control);
  kv["synth.fs"] = format_double(cohort.fs);
  kv["synth.duration_s"] = format_double(cohort.duration_s);
  kv["synth.effect"] = format_double(cohort.effect);
  std::string chans;
  for (std::size_t i = 0; i < cohort.channels.size(); ++i) chans += (i ? "," : "") + cohort.channels[i];
  kv["synth.channels"] = chans;
  return kv;
}

PipelineConfig PipelineConfig::from_map(const std::map<std::string, std::string>& kv) {
  PipelineConfig c;
  using Setter = std::function<void(const Parser&)>;
  const std::map<std::string, Setter> setters = {
      {"filter.enabled", [&](const Parser& p) { c.filter_enabled = p.boolean(); }},
      {"filter.kind",
       [&](const Parser& p) {
         if (p.value == "bandpass") c.filter.kind = FilterKind::kBandpass;
         else if (p.value == "highpass") c.filter.kind = FilterKind::kHighpass;
         else if (p.value == "lowpass") c.filter.kind = FilterKind::kLowpass;
         else p.fail("bandpass|highpass|lowpass");
       }},
      {"filter.low_hz", [&](const Parser& p) { c.filter.low_hz = p.real(); }},
      {"filter.high_hz", [&](const Parser& p) { c.filter.high_hz = p.real(); }},
      {"filter.order", [&](const Parser& p) { c.filter.order = static_cast<int>(p.unsigned_int()); }},
      {"filter.zero_phase", [&](const Parser& p) { c.filter.zero_phase = p.boolean(); }},
      {"ocular.enabled", [&](const Parser& p) { c.ocular_enabled = p.boolean(); }},
      {"ocular.wavelet", [&](const Parser& p) { c.ocular.wavelet = p.parsed(parse_wavelet, "haar|db2|db4"); }},
      {"ocular.levels", [&](const Parser& p) { c.ocular.levels = static_cast<int>(p.unsigned_int()); }},
      {"ocular.process_var", [&](const Parser& p) { c.ocular.process_var = p.real(); }},
      {"ocular.measurement_var", [&](const Parser& p) { c.ocular.measurement_var = p.real(); }},
      {"welch.segment_len", [&](const Parser& p) { c.welch.segment_len = p.unsigned_int(); }},
      {"welch.overlap", [&](const Parser& p) { c.welch.overlap = p.real(); }},
      {"welch.window", [&](const Parser& p) { c.welch.window = p.parsed(parse_window, "hamming|hann|rect"); }},
      {"linear.band_lo", [&](const Parser& p) { c.band_lo = p.real(); }},
      {"linear.band_hi", [&](const Parser& p) { c.band_hi = p.real(); }},
      {"linear.center", [&](const Parser& p) { c.center = p.parsed(parse_center_mode, "centroid|median"); }},
      {"embed.m", [&](const Parser& p) { c.embedding.m = p.unsigned_int(); }},
      {"embed.tau", [&](const Parser& p) { c.embedding.tau = p.unsigned_int(); }},
      {"embed.theiler",
       [&](const Parser& p) {
         if (p.value == "auto") c.embedding.theiler_w.reset();
         else c.embedding.theiler_w = p.unsigned_int();
       }},
      {"embed.max_points", [&](const Parser& p) { c.embedding.max_points = p.unsigned_int(); }},
      {"renyi.bins", [&](const Parser& p) { c.renyi.k_bins = p.unsigned_int(); }},
      {"renyi.alpha", [&](const Parser& p) { c.renyi.alpha = p.real(); }},
      {"features.set", [&](const Parser& p) { c.feature_set = p.value; }},
      {"classify.preset", [&](const Parser& p) { c.preset = p.value; }},
      {"classify.normalize",
       [&](const Parser& p) { c.normalize = p.parsed(parse_normalize_mode, "fold|global"); }},
      {"seed", [&](const Parser& p) { c.seed = p.unsigned_int(); }},
      {"synth.n_depressed", [&](const Parser& p) { c.cohort.n_depressed = p.unsigned_int(); }},
      {"synth.n_control", [&](const Parser& p) { c.cohort.n_control = p.unsigned_int(); }},
      {"synth.fs", [&](const Parser& p) { c.cohort.fs = p.real(); }},
      {"synth.duration_s", [&](const Parser& p) { c.cohort.duration_s = p.real(); }},
      {"synth.effect", [&](const Parser& p) { c.cohort.effect = p.real(); }},
      {"synth.channels",
       [&](const Parser& p) {
         c.cohort.channels.clear();
         for (const auto& ch : split(p.value, ',')) c.cohort.channels.push_back(trim(ch));
       }},
  };
  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      std::string known;
      for (const auto& [k, _] : setters) known += (known.empty() ? "" : ", ") + k;
      throw ValidationError("unknown config key '" + key + "'; known keys: " + known);
    }
    it->second(Parser{key, value});
  }
  c.cohort.seed = c.seed;
  c.validate();
  return c;
}

void PipelineConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
  };
  check(filter.order >= 1, "filter.order must be >= 1");
  check(filter.low_hz > 0.0, "filter.low_hz must be > 0");
  check(filter.kind != FilterKind::kBandpass || filter.low_hz < filter.high_hz,
        "filter.low_hz must be below filter.high_hz");
  check(ocular.levels >= 1 && ocular.levels < 30, "ocular.levels must be in [1, 30)");
  check(welch.segment_len >= 8, "welch.segment_len must be >= 8");
  check(welch.overlap >= 0.0 && welch.overlap < 1.0, "welch.overlap must be in [0, 1)");
  check(band_lo < band_hi, "linear.band_lo must be below linear.band_hi");
  check(embedding.m >= 2, "embed.m must be >= 2");
  check(renyi.k_bins >= 2, "renyi.bins must be >= 2");
  check(renyi.alpha > 0.0 && renyi.alpha != 1.0, "renyi.alpha must be > 0 and != 1");
  check(cohort.n_depressed >= 1 && cohort.n_control >= 1, "synth group sizes must be >= 1");
  check(cohort.fs > 0.0 && cohort.duration_s > 0.0, "synth.fs and synth.duration_s must be > 0");
  check(!cohort.channels.empty(), "synth.channels must list at least one channel");
  resolve_feature_set(feature_set);
  try {
    preset_grid(preset);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("classify.preset: ") + e.what());
  }
}

std::string PipelineConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : to_map()) out += k + " = " + v + "\n";
  return out;
}

PipelineConfig PipelineConfig::parse(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (kv.count(key)) throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return from_map(kv);
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string PipelineConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Manifest

nlohmann::json Manifest::to_json() const {
  nlohmann::json entries_j = nlohmann::json::array();
  for (const auto& e : entries) {
    entries_j.push_back({{"subject_id", e.subject_id},
                         {"label", e.label ? label_name(*e.label) : "unknown"},
                         {"file", e.file},
                         {"fs", e.fs}});
  }
  return {{"version", version}, {"entries", entries_j}};
}

Manifest Manifest::from_json(const nlohmann::json& j, const fs::path& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  try {
    m.version = j.at("version").get<int>();
    std::set<std::string> seen;
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.subject_id = e.at("subject_id").get<std::string>();
      const auto label = e.at("label").get<std::string>();
      if (label != "unknown") entry.label = parse_label(label);
      entry.file = e.at("file").get<std::string>();
      entry.fs = e.at("fs").get<double>();
      if (!(entry.fs > 0.0)) throw ValidationError("manifest: fs must be > 0 for '" + entry.subject_id + "'");
      if (!seen.insert(entry.subject_id).second) {
        throw ValidationError("manifest: duplicate subject_id '" + entry.subject_id + "'");
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  return m;
}

Manifest Manifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read manifest '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  auto m = from_json(j, path.parent_path());
  for (const auto& e : m.entries) {
    if (!fs::exists(m.base_dir / e.file)) {
      throw ValidationError("manifest: recording '" + e.file + "' for '" + e.subject_id + "' does not exist");
    }
  }
  return m;
}

std::string recording_csv(const Recording& r) {
  std::string out;
  for (std::size_t c = 0; c < r.channels.size(); ++c) out += (c ? "," : "") + r.channels[c].label();
  out += '\n';
  const std::size_t n = r.channels.empty() ? 0 : r.channels.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < r.channels.size(); ++c) {
      if (c) out += ',';
      out += format_double(r.channels[c][i]);
    }
    out += '\n';
  }
  return out;
}

Recording read_recording_csv(const fs::path& path, const std::string& subject_id, std::optional<Label> label,
                             double fs_hz) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open recording '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("recording '" + path.string() + "' is empty");
  std::vector<std::string> names;
  for (const auto& n : split(trim(line), ',')) names.push_back(trim(n));
  if (names.empty() || std::any_of(names.begin(), names.end(), [](const auto& n) { return n.empty(); })) {
    throw std::runtime_error("recording '" + path.string() + "' has an invalid header");
  }
  std::vector<std::vector<double>> cols(names.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != names.size()) {
      throw std::runtime_error("recording '" + path.string() + "' line " + std::to_string(lineno) + ": expected " +
                               std::to_string(names.size()) + " fields");
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      try {
        cols[c].push_back(parse_double(fields[c]));
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error("recording '" + path.string() + "' line " + std::to_string(lineno) + ": " +
                                 e.what());
      }
    }
  }
  Recording r;
  r.subject_id = subject_id;
  r.label = label.value_or(Label::kControl);
  r.fs = fs_hz;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (cols[c].empty()) throw std::runtime_error("recording '" + path.string() + "' has no samples");
    try {
      r.channels.emplace_back(std::move(cols[c]), fs_hz, names[c]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("recording '" + path.string() + "': " + e.what());
    }
  }
  return r;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Manifest write_cohort(const std::vector<Recording>& cohort, const fs::path& dir, const PipelineConfig& cfg) {
  Manifest m;
  m.base_dir = dir;
  for (const auto& r : cohort) {
    const std::string file = r.subject_id + ".csv";
    write_text_file(dir / file, recording_csv(r));
    m.entries.push_back({r.subject_id, r.label, file, r.fs});
  }
  write_text_file(dir / "manifest.json", m.to_json().dump(2) + "\n");
  write_text_file(dir / "synth_config.conf", cfg.serialize());
  return m;
}

// ---------------------------------------------------------------------------
// Extraction

TimeSeries preprocess_channel(const TimeSeries& x, const PipelineConfig& cfg) {
  TimeSeries y = x;
  if (cfg.filter_enabled) y = bandlimit(y, cfg.filter);
  if (cfg.ocular_enabled) y = remove_ocular(y, cfg.ocular);
  return y;
}

std::vector<double> channel_features(const TimeSeries& x, const std::vector<FeatureKind>& kinds,
                                     const PipelineConfig& cfg) {
  std::optional<SpectralSummary> spectral;
  auto spectrum = [&]() -> const SpectralSummary& {
    if (!spectral) spectral = spectral_features(welch_psd(x, cfg.welch), cfg.band_lo, cfg.band_hi, cfg.center);
    return *spectral;
  };
  std::vector<double> out;
  for (auto k : kinds) {
    switch (k) {
      case FeatureKind::kCd: out.push_back(correlation_dimension(x, cfg.embedding).cd); break;
      case FeatureKind::kRenyi: out.push_back(renyi_entropy(x, cfg.renyi)); break;
      case FeatureKind::kC0: out.push_back(c0_complexity(x).c0); break;
      case FeatureKind::kPowMax: out.push_back(spectrum().max_power); break;
      case FeatureKind::kPowMean: out.push_back(spectrum().mean_power); break;
      case FeatureKind::kPowCenter: out.push_back(spectrum().center_hz); break;
    }
  }
  return out;
}

ExtractResult extract_features(const Manifest& manifest, const PipelineConfig& cfg, std::size_t jobs) {
  const auto kinds = resolve_feature_set(cfg.feature_set);
  const std::size_t n = manifest.entries.size();

  struct Slot {
    std::vector<std::string> channels;
    std::vector<double> values;
    std::string error;
  };
  std::vector<Slot> slots(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    try {
      const auto rec = read_recording_csv(manifest.base_dir / e.file, e.subject_id, e.label, e.fs);
      for (const auto& ch : rec.channels) {
        slots[i].channels.push_back(ch.label());
        const auto v = channel_features(preprocess_channel(ch, cfg), kinds, cfg);
        slots[i].values.insert(slots[i].values.end(), v.begin(), v.end());
      }
    } catch (const std::exception& ex) {
      slots[i].error = ex.what();
    }
  });

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return manifest.entries[a].subject_id < manifest.entries[b].subject_id;
  });

  ExtractResult r;
  std::optional<std::vector<std::string>> channels;
  for (std::size_t i : order) {
    const auto& e = manifest.entries[i];
    auto& s = slots[i];
    if (s.error.empty() && channels && s.channels != *channels) {
      s.error = "channel layout differs from the first subject";
    }
    if (!s.error.empty()) {
      r.skipped.push_back(e.subject_id + ": " + s.error);
      continue;
    }
    if (!channels) {
      channels = s.channels;
      r.columns = feature_columns(*channels, kinds);
    }
    r.subject_ids.push_back(e.subject_id);
    r.labels.push_back(e.label);
    r.rows.push_back(std::move(s.values));
  }
  return r;
}

std::string feature_csv(const ExtractResult& r) {
  std::string out = "subject_id,label";
  for (const auto& c : r.columns) out += "," + c;
  out += '\n';
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    out += r.subject_ids[i] + "," + (r.labels[i] ? label_name(*r.labels[i]) : std::string("unknown"));
    for (double v : r.rows[i]) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

ExtractResult read_feature_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read feature file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("feature file '" + path.string() + "' is empty");
  auto header = split(trim(line), ',');
  if (header.size() < 3 || header[0] != "subject_id" || header[1] != "label") {
    throw ValidationError("feature file must start with 'subject_id,label' and at least one feature column");
  }
  ExtractResult r;
  r.columns.assign(header.begin() + 2, header.end());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != header.size()) {
      throw ValidationError("feature file line " + std::to_string(lineno) + ": wrong field count");
    }
    r.subject_ids.push_back(f[0]);
    if (f[1] == "unknown") {
      r.labels.emplace_back();
    } else {
      try {
        r.labels.emplace_back(parse_label(f[1]));
      } catch (const std::invalid_argument& e) {
        throw ValidationError("feature file line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    std::vector<double> row;
    for (std::size_t c = 2; c < f.size(); ++c) {
      try {
        row.push_back(parse_double(f[c]));
      } catch (const std::invalid_argument& e) {
        throw ValidationError("feature file line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

FeatureMatrix to_feature_matrix(const ExtractResult& r) {
  std::vector<double> values;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (!r.labels[i]) throw ValidationError("subject '" + r.subject_ids[i] + "' is unlabeled");
    labels.push_back(*r.labels[i]);
    values.insert(values.end(), r.rows[i].begin(), r.rows[i].end());
  }
  try {
    return FeatureMatrix(r.subject_ids, r.columns, std::move(values), std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

nlohmann::json run_metadata(const std::string& command, const PipelineConfig& cfg) {
  return {{"tool", "eegdep"},
          {"version", kToolVersion},
          {"command", command},
          {"config_hash", "fnv1a64:" + cfg.hash()},
          {"config", cfg.to_map()}};
}

std::string summary_table(const CvReport& r) {
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("     n/a");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%7.2f%%", 100.0 * *v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "classifier  dim       Acc       Sen       Spe\n";
  char head[64];
  std::snprintf(head, sizeof(head), "%-10s  %3zu", r.classifier.c_str(), r.feature_set.size());
  os << head << "  " << pct(r.scores.accuracy) << "  " << pct(r.scores.sensitivity) << "  "
     << pct(r.scores.specificity) << "\n";
  os << "params: " << r.best_params.dump() << "\n";
  os << "normalize: " << normalize_mode_name(r.normalize) << ", folds: " << r.per_fold.size()
     << ", failed: " << r.failed_folds << "\n";
  return os.str();
}

}  // namespace eegdep
