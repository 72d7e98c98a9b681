#include "pttseize/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "pttseize/error.hpp"
#include "pttseize/io.hpp"
#include "pttseize/parallel.hpp"

namespace pttseize {

using nlohmann::json;

std::string_view case_status_name(CaseStatus s) noexcept {
  switch (s) {
    case CaseStatus::Used: return "used";
    case CaseStatus::Excluded: return "excluded";
    case CaseStatus::Failed: return "failed";
  }
  return "failed";
}

CaseTrace compute_case_ptt(const std::string& id, const PreprocessedCase& pc, const PipelineConfig& cfg) {
  if (cfg.algorithm == Algorithm::Naive) return {id, naive_ptt(pc.ecg, pc.ppg), {}};
  auto r = reactive_ptt(pc.ecg, pc.ppg, cfg.reactive);
  return {id, std::move(r.series), std::move(r.offsets)};
}

CaseResult process_case(const Case& c, const PipelineConfig& cfg) {
  CaseResult res;
  res.outcome.id = c.id();
  auto log = [&](const std::string& stage, const std::string& detail) {
    res.log.push_back("case=" + c.id() + " stage=" + stage + " " + detail);
  };

  std::optional<PreprocessedCase> pc;
  try {
    pc = preprocess_case(c, cfg.preprocess);
  } catch (const Error& e) {
    res.outcome.status = CaseStatus::Failed;
    res.outcome.reason = e.what();
    log("preprocess", "status=failed reason=" + std::string(errc_name(e.code())));
    return res;
  }
  res.outcome.ecg_outliers = pc->ecg_outliers;
  res.outcome.ppg_outliers = pc->ppg_outliers;
  res.outcome.mean_rr_diff_ms = pc->mean_rr_diff_ms;
  log("preprocess", "ecg_outliers=" + std::to_string(pc->ecg_outliers) +
                        " ppg_outliers=" + std::to_string(pc->ppg_outliers) +
                        " mean_rr_diff_ms=" + format_number(pc->mean_rr_diff_ms) +
                        " excluded=" + (pc->excluded ? "true" : "false"));
  if (pc->excluded) {
    res.outcome.status = CaseStatus::Excluded;
    res.outcome.reason = "mean RR difference " + format_number(pc->mean_rr_diff_ms) + " ms exceeds k = " +
                         format_number(cfg.preprocess.k_exclusion_ms) + " ms";
    return res;
  }

  std::optional<CaseTrace> trace;
  try {
    trace.emplace(compute_case_ptt(c.id(), *pc, cfg));
  } catch (const Error& e) {
    res.outcome.status = CaseStatus::Failed;
    res.outcome.reason = e.what();
    log("ptt", "status=failed reason=" + std::string(errc_name(e.code())));
    return res;
  }
  res.outcome.ptt_points = trace->series.size();
  log("ptt", "algorithm=" + std::string(algorithm_name(cfg.algorithm)) +
                 " points=" + std::to_string(trace->series.size()));

  if (c.has_seizure()) {
    const auto seizures = c.seizures();
    const auto first = std::min_element(seizures.begin(), seizures.end(),
                                        [](const auto& a, const auto& b) { return a.start < b.start; });
    if (auto s = make_positive_sample(trace->series, *first, cfg.features, c.id())) {
      res.samples.push_back(std::move(*s));
    } else {
      res.outcome.positive_discarded = true;
    }
  } else {
    res.samples = make_negative_samples(trace->series, cfg.features, c.id());
  }
  for (const auto& s : res.samples) (s.label ? res.outcome.positives : res.outcome.negatives)++;
  log("features", "positives=" + std::to_string(res.outcome.positives) +
                      " negatives=" + std::to_string(res.outcome.negatives) +
                      " positive_discarded=" + (res.outcome.positive_discarded ? "true" : "false"));
  if (cfg.export_traces) res.trace = std::move(*trace);
  return res;
}

PipelineResult run_pipeline(const std::vector<Case>& cases, const PipelineConfig& cfg, const LogSink& sink) {
  cfg.validate();
  std::vector<std::size_t> order(cases.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cases[a].id() < cases[b].id(); });

  std::vector<CaseResult> slots(cases.size());
  parallel_for(order.size(), cfg.threads, [&](std::size_t k) { slots[k] = process_case(cases[order[k]], cfg); });

  PipelineResult out;
  auto emit = [&](const std::string& line) {
    out.log.push_back(line);
    if (sink) sink(line);
  };
  std::size_t used = 0;
  for (auto& slot : slots) {
    for (const auto& line : slot.log) emit(line);
    if (slot.outcome.status == CaseStatus::Used) ++used;
    out.cases.push_back(slot.outcome);
    std::move(slot.samples.begin(), slot.samples.end(), std::back_inserter(out.dataset));
    if (slot.trace) out.traces.push_back(std::move(*slot.trace));
  }
  const auto excluded = std::count_if(out.cases.begin(), out.cases.end(),
                                      [](const CaseOutcome& o) { return o.status == CaseStatus::Excluded; });
  emit("stage=preprocess cases=" + std::to_string(cases.size()) + " used=" + std::to_string(used) +
       " excluded=" + std::to_string(excluded));
  if (used == 0) throw Error(Errc::EmptyCorpusAfterExclusion, "no case survived preprocessing");

  ForestHyperparams hp = cfg.forest;
  hp.seed = cfg.seed;
  if (cfg.search.enabled) {
    out.search = random_search(out.dataset, cfg.search.n_draws, cfg.search.ranges, cfg.seed, cfg.n_folds, hp,
                               cfg.threads);
    hp = out.search->best;
    for (std::size_t d = 0; d < out.search->draws.size(); ++d) {
      const auto& draw = out.search->draws[d];
      emit("stage=search draw=" + std::to_string(d) + " n_trees=" + std::to_string(draw.hp.n_trees) +
           " max_depth=" + std::to_string(draw.hp.max_depth) +
           " min_samples_split=" + std::to_string(draw.hp.min_samples_split) + " mean_f1=" + format_number(draw.mean.f1));
    }
  }
  out.chosen = hp;
  out.cv = cross_validate(out.dataset, hp, cfg.n_folds, cfg.seed, cfg.threads);
  emit("stage=cv mean_f1=" + format_number(out.cv.mean.f1) + " std_f1=" + format_number(out.cv.stddev.f1));
  out.model = fit(out.dataset, hp, cfg.threads);

  out.report = evaluate_scores(out.dataset, out.cv.oof_proba, cfg.features);
  out.report.mean = out.cv.mean;
  out.report.stddev = out.cv.stddev;
  out.report.folds = out.cv.folds;
  return out;
}

namespace {

json metrics_json(const MetricSummary& m) {
  return {{"sensitivity", m.sensitivity}, {"specificity", m.specificity}, {"precision", m.precision}, {"f1", m.f1}};
}

json confusion_json(const ConfusionMetrics& m) {
  return {{"tp", m.tp},
          {"fp", m.fp},
          {"tn", m.tn},
          {"fn", m.fn},
          {"sensitivity", m.sensitivity},
          {"specificity", m.specificity},
          {"precision", m.precision},
          {"f1", m.f1}};
}

json hp_json(const ForestHyperparams& hp) {
  return {{"n_trees", hp.n_trees},
          {"max_depth", hp.max_depth},
          {"min_samples_split", hp.min_samples_split},
          {"features_per_split", hp.features_per_split},
          {"seed", hp.seed}};
}

json evaluation_json(const EvaluationReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds) folds.push_back(confusion_json(f));
  json per_type = json::object();
  for (const auto& [type, row] : r.per_type) {
    per_type[std::string(seizure_type_name(type))] = {{"correct", row.correct}, {"total", row.total}, {"rate", row.rate}};
  }
  return {{"mean", metrics_json(r.mean)},
          {"std", metrics_json(r.stddev)},
          {"folds", folds},
          {"pooled", confusion_json(r.pooled)},
          {"auc", r.roc.auc},
          {"n_positive", r.n_positive},
          {"n_negative", r.n_negative},
          {"negative_hours", r.negative_hours},
          {"false_positives", r.pooled.fp},
          {"far_per_day", r.far_per_day},
          {"detection_latency_s", r.detection_latency_s},
          {"per_type", per_type}};
}

}  // namespace

std::string evaluation_to_json(const EvaluationReport& report) {
  json j = {{"format", "pttseize-report"}, {"version", 1}, {"evaluation", evaluation_json(report)}};
  return j.dump(2) + "\n";
}

std::string report_to_json(const PipelineResult& result, const PipelineConfig& cfg) {
  json outcomes = json::array();
  json excluded_ids = json::array();
  json failed = json::array();
  std::size_t used = 0;
  for (const auto& o : result.cases) {
    outcomes.push_back({{"id", o.id},
                        {"status", case_status_name(o.status)},
                        {"reason", o.reason},
                        {"ecg_outliers", o.ecg_outliers},
                        {"ppg_outliers", o.ppg_outliers},
                        {"mean_rr_diff_ms", o.mean_rr_diff_ms},
                        {"ptt_points", o.ptt_points},
                        {"positives", o.positives},
                        {"negatives", o.negatives},
                        {"positive_discarded", o.positive_discarded}});
    if (o.status == CaseStatus::Used) ++used;
    if (o.status == CaseStatus::Excluded) excluded_ids.push_back(o.id);
    if (o.status == CaseStatus::Failed) failed.push_back({{"id", o.id}, {"reason", o.reason}});
  }
  json search = json::array();
  if (result.search) {
    for (const auto& d : result.search->draws) {
      search.push_back({{"hyperparams", hp_json(d.hp)}, {"mean", metrics_json(d.mean)}, {"std", metrics_json(d.stddev)}});
    }
  }
  const json j = {{"format", "pttseize-report"},
                  {"version", 1},
                  {"algorithm", algorithm_name(cfg.algorithm)},
                  {"config", json::parse(pipeline_config_to_json(cfg))},
                  {"cases",
                   {{"total", result.cases.size()},
                    {"used", used},
                    {"excluded", excluded_ids.size()},
                    {"excluded_ids", excluded_ids},
                    {"failed", failed},
                    {"outcomes", outcomes}}},
                  {"hyperparams", hp_json(result.chosen)},
                  {"search", search},
                  {"evaluation", evaluation_json(result.report)}};
  return j.dump(2) + "\n";
}

void write_offset_csv(const std::filesystem::path& path, const OffsetTrace& trace) {
  std::ostringstream out;
  out << "t_ms,value_ms\n";
  for (const auto& p : trace) out << format_number(p.t) << ',' << format_number(p.offset) << '\n';
  write_text_file(path, out.str());
}

void write_run_outputs(const PipelineResult& result, const PipelineConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
  write_dataset_csv(cfg.output_dir / "dataset.csv", result.dataset, cfg.features.n_windows);
  write_text_file(cfg.output_dir / "report.json", report_to_json(result, cfg));
  write_roc_csv(cfg.output_dir / "roc.csv", result.report.roc);
  save_forest(cfg.output_dir / "model.json", result.model);
  std::string log;
  for (const auto& line : result.log) log += line + "\n";
  write_text_file(cfg.output_dir / "run.log", log);
  if (cfg.export_traces && !result.traces.empty()) {
    const fs::path dir = cfg.output_dir / "traces";
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& t : result.traces) {
      write_series_csv(dir / (t.id + "_ptt.csv"), t.series);
      if (!t.offsets.empty()) write_offset_csv(dir / (t.id + "_offset.csv"), t.offsets);
    }
  }
}

}  // namespace pttseize
