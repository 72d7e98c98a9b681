#include "pttseize/config.hpp"

#include <set>
#include <system_error>

#include <json.hpp>

#include "pttseize/error.hpp"
#include "pttseize/io.hpp"

namespace pttseize {

using nlohmann::json;

namespace {

constexpr const char* kConfigFormat = "pttseize-config";
constexpr const char* kCorpusFormat = "pttseize-corpus";
constexpr int kVersion = 1;

// Reads an object field by field and rejects whatever was not asked for.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw Error(Errc::Parse, where_ + ": expected an object");
  }

  template <typename T>
  bool get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return false;
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw Error(Errc::Parse, where_ + "." + key + ": " + e.what());
    }
    return true;
  }

  template <typename T>
  void require(const char* key, T& out) {
    if (!get(key, out)) throw Error(Errc::Parse, where_ + ": missing '" + key + "'");
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw Error(Errc::Parse, "unknown key '" + where_ + "." + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void check_header(Fields& f, const char* format) {
  std::string fmt;
  int version = 0;
  f.require("format", fmt);
  f.require("version", version);
  if (fmt != format) throw Error(Errc::Parse, std::string("expected format '") + format + "', got '" + fmt + "'");
  if (version != kVersion) throw Error(Errc::Parse, "unsupported version " + std::to_string(version));
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Parse, std::string(what) + ": " + e.what());
  }
}

template <typename R>
void get_range(Fields& f, const char* key, R& range) {
  if (const json* j = f.child(key)) {
    if (!j->is_array() || j->size() != 2) throw Error(Errc::Parse, f.path(key) + ": expected [lo, hi]");
    try {
      range.lo = (*j)[0].get<decltype(range.lo)>();
      range.hi = (*j)[1].get<decltype(range.hi)>();
    } catch (const json::exception& e) {
      throw Error(Errc::Parse, f.path(key) + ": " + e.what());
    }
  }
}

SeizureType seizure_type_from(const std::string& name) { return parse_seizure_type(name).type; }

GeneratorEvent parse_event(const json& j, const std::string& where) {
  Fields f(j, where);
  GeneratorEvent ev;
  std::string type = "other";
  f.require("start_s", ev.start_s);
  f.require("end_s", ev.end_s);
  f.get("ptt_delta_ms", ev.ptt_delta_ms);
  f.get("hr_delta_bpm", ev.hr_delta_bpm);
  f.get("type", type);
  f.get("annotated", ev.annotated);
  f.finish();
  ev.type = seizure_type_from(type);
  return ev;
}

GeneratorSpec parse_generator_spec(const json& j, const std::string& where) {
  Fields f(j, where);
  GeneratorSpec s;
  f.get("id", s.id);
  f.get("duration_s", s.duration_s);
  f.get("base_hr_bpm", s.base_hr_bpm);
  f.get("hrv_sigma_ms", s.hrv_sigma_ms);
  f.get("true_ptt_baseline_ms", s.true_ptt_baseline_ms);
  f.get("drift_rate_ms_per_s", s.drift_rate_ms_per_s);
  f.get("clock_offset_ms", s.clock_offset_ms);
  f.get("noise_sigma_ms", s.noise_sigma_ms);
  f.get("ppg_rr_bias_ms", s.ppg_rr_bias_ms);
  f.get("ramp_s", s.ramp_s);
  f.get("dropout", s.dropout);
  f.get("seed", s.seed);
  if (const json* events = f.child("events")) {
    if (!events->is_array()) throw Error(Errc::Parse, where + ".events: expected an array");
    for (std::size_t i = 0; i < events->size(); ++i) {
      s.events.push_back(parse_event((*events)[i], where + ".events[" + std::to_string(i) + "]"));
    }
  }
  f.finish();
  s.validate();
  return s;
}

CorpusVariation parse_variation(const json& j) {
  Fields f(j, "variation");
  CorpusVariation v;
  get_range(f, "duration_s", v.duration_s);
  get_range(f, "base_hr_bpm", v.base_hr_bpm);
  get_range(f, "drift_rate_ms_per_s", v.drift_rate_ms_per_s);
  f.get("random_drift_sign", v.random_drift_sign);
  get_range(f, "clock_offset_ms", v.clock_offset_ms);
  get_range(f, "ppg_rr_bias_ms", v.ppg_rr_bias_ms);
  get_range(f, "event_duration_s", v.event_duration_s);
  get_range(f, "event_ptt_delta_ms", v.event_ptt_delta_ms);
  get_range(f, "event_hr_delta_bpm", v.event_hr_delta_bpm);
  f.get("event_margin_s", v.event_margin_s);
  std::vector<std::string> types;
  if (f.get("event_types", types)) {
    v.event_types.clear();
    for (const auto& t : types) v.event_types.push_back(seizure_type_from(t));
  }
  f.get("confounders_per_hour", v.confounders_per_hour);
  get_range(f, "confounder_ptt_delta_ms", v.confounder_ptt_delta_ms);
  get_range(f, "confounder_duration_s", v.confounder_duration_s);
  f.finish();
  return v;
}

json range_json(const IntRange& r) { return json::array({r.lo, r.hi}); }

}  // namespace

std::string_view algorithm_name(Algorithm a) noexcept { return a == Algorithm::Naive ? "naive" : "reactive"; }

void PipelineConfig::validate() const {
  preprocess.validate();
  reactive.validate();
  features.validate();
  forest.validate();
  if (n_folds < 2) throw Error(Errc::InvalidArgument, "n_folds must be >= 2");
  if (search.enabled) {
    if (search.n_draws < 1) throw Error(Errc::InvalidArgument, "search.n_draws must be >= 1");
    for (const IntRange* r : {&search.ranges.n_trees, &search.ranges.max_depth, &search.ranges.min_samples_split}) {
      if (r->lo > r->hi) throw Error(Errc::EmptyRange, "search range is empty");
    }
  }
}

PipelineConfig parse_pipeline_config(std::string_view text, const fs::path& base_dir) {
  const json root = parse_json(text, "config");
  Fields f(root, "config");
  check_header(f, kConfigFormat);

  PipelineConfig cfg;
  std::string corpus, output_dir, algorithm = "reactive";
  f.get("corpus", corpus);
  if (f.get("output_dir", output_dir)) cfg.output_dir = output_dir;
  if (!corpus.empty()) cfg.corpus = corpus;
  f.get("algorithm", algorithm);
  if (algorithm == "naive") cfg.algorithm = Algorithm::Naive;
  else if (algorithm == "reactive") cfg.algorithm = Algorithm::Reactive;
  else throw Error(Errc::Parse, "config.algorithm must be 'naive' or 'reactive'");
  f.get("seed", cfg.seed);
  f.get("threads", cfg.threads);
  f.get("n_folds", cfg.n_folds);
  f.get("export_traces", cfg.export_traces);

  if (const json* j = f.child("preprocess")) {
    Fields p(*j, "preprocess");
    p.get("sigma_factor", cfg.preprocess.sigma_factor);
    p.get("k_ms", cfg.preprocess.k_exclusion_ms);
    p.finish();
  }
  if (const json* j = f.child("reactive")) {
    Fields r(*j, "reactive");
    r.get("window_s", cfg.reactive.window_s);
    r.get("c", cfg.reactive.c);
    r.get("availability_frac", cfg.reactive.availability_frac);
    r.get("stride", cfg.reactive.stride);
    r.finish();
  }
  if (const json* j = f.child("features")) {
    Fields x(*j, "features");
    x.get("sample_len_s", cfg.features.sample_len_s);
    x.get("n_windows", cfg.features.n_windows);
    x.get("o_s_s", cfg.features.o_s_s);
    x.finish();
  }
  if (const json* j = f.child("forest")) {
    Fields x(*j, "forest");
    x.get("n_trees", cfg.forest.n_trees);
    x.get("max_depth", cfg.forest.max_depth);
    x.get("min_samples_split", cfg.forest.min_samples_split);
    x.get("features_per_split", cfg.forest.features_per_split);
    x.finish();
  }
  if (const json* j = f.child("search")) {
    Fields x(*j, "search");
    x.get("enabled", cfg.search.enabled);
    x.get("n_draws", cfg.search.n_draws);
    get_range(x, "n_trees", cfg.search.ranges.n_trees);
    get_range(x, "max_depth", cfg.search.ranges.max_depth);
    get_range(x, "min_samples_split", cfg.search.ranges.min_samples_split);
    x.finish();
  }
  f.finish();

  cfg.forest.seed = cfg.seed;
  if (!cfg.corpus.empty() && cfg.corpus.is_relative()) cfg.corpus = base_dir / cfg.corpus;
  if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  return parse_pipeline_config(read_text_file(path), path.parent_path());
}

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  const json j = {
      {"format", kConfigFormat},
      {"version", kVersion},
      {"corpus", cfg.corpus.generic_string()},
      {"output_dir", cfg.output_dir.generic_string()},
      {"algorithm", algorithm_name(cfg.algorithm)},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
      {"n_folds", cfg.n_folds},
      {"export_traces", cfg.export_traces},
      {"preprocess", {{"sigma_factor", cfg.preprocess.sigma_factor}, {"k_ms", cfg.preprocess.k_exclusion_ms}}},
      {"reactive",
       {{"window_s", cfg.reactive.window_s},
        {"c", cfg.reactive.c},
        {"availability_frac", cfg.reactive.availability_frac},
        {"stride", cfg.reactive.stride}}},
      {"features",
       {{"sample_len_s", cfg.features.sample_len_s},
        {"n_windows", cfg.features.n_windows},
        {"o_s_s", cfg.features.o_s_s}}},
      {"forest",
       {{"n_trees", cfg.forest.n_trees},
        {"max_depth", cfg.forest.max_depth},
        {"min_samples_split", cfg.forest.min_samples_split},
        {"features_per_split", cfg.forest.features_per_split}}},
      {"search",
       {{"enabled", cfg.search.enabled},
        {"n_draws", cfg.search.n_draws},
        {"n_trees", range_json(cfg.search.ranges.n_trees)},
        {"max_depth", range_json(cfg.search.ranges.max_depth)},
        {"min_samples_split", range_json(cfg.search.ranges.min_samples_split)}}},
  };
  return j.dump(2) + "\n";
}

CorpusSpec parse_corpus_spec(std::string_view text) {
  const json root = parse_json(text, "corpus spec");
  Fields f(root, "corpus");
  check_header(f, kCorpusFormat);
  CorpusSpec spec;
  f.require("n_cases", spec.n_cases);
  f.get("seizure_fraction", spec.seizure_fraction);
  f.get("seed", spec.seed);
  if (const json* j = f.child("template")) spec.template_spec = parse_generator_spec(*j, "template");
  if (const json* j = f.child("variation")) spec.variation = parse_variation(*j);
  f.finish();
  if (!(spec.seizure_fraction >= 0.0 && spec.seizure_fraction <= 1.0)) {
    throw Error(Errc::InvalidArgument, "seizure_fraction must be in [0, 1]");
  }
  return spec;
}

CorpusSpec load_corpus_spec(const fs::path& path) { return parse_corpus_spec(read_text_file(path)); }

std::string ground_truth_to_json(const std::string& case_id, const GroundTruth& truth) {
  json t = json::array(), ptt = json::array(), drift = json::array();
  for (const auto& b : truth.beats) {
    t.push_back(b.t);
    ptt.push_back(b.true_ptt);
    drift.push_back(b.drift);
  }
  json events = json::array();
  for (const auto& ev : truth.events) {
    events.push_back({{"start_s", ev.start_s},
                      {"end_s", ev.end_s},
                      {"ptt_delta_ms", ev.ptt_delta_ms},
                      {"hr_delta_bpm", ev.hr_delta_bpm},
                      {"type", seizure_type_name(ev.type)},
                      {"annotated", ev.annotated}});
  }
  const json j = {{"id", case_id},
                  {"events", events},
                  {"beats", {{"t_ms", t}, {"true_ptt_ms", ptt}, {"drift_ms", drift}}}};
  return j.dump() + "\n";
}

fs::path write_corpus(const fs::path& out_dir, const std::vector<GeneratedCase>& corpus) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::string> entries;
  for (const auto& gc : corpus) {
    const fs::path dir = out_dir / gc.kase.id();
    save_case(dir, gc.kase);
    write_text_file(dir / "groundtruth.json", ground_truth_to_json(gc.kase.id(), gc.truth));
    entries.push_back(gc.kase.id() + "/case.json");
  }
  const fs::path manifest = out_dir / "manifest.json";
  write_manifest(manifest, entries);
  return manifest;
}

}  // namespace pttseize
