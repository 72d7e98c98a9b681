#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pttseize/classifier.hpp"
#include "pttseize/config.hpp"
#include "pttseize/eval.hpp"
#include "pttseize/preprocess.hpp"
#include "pttseize/ptt.hpp"

namespace pttseize {

enum class CaseStatus { Used, Excluded, Failed };

std::string_view case_status_name(CaseStatus s) noexcept;

struct CaseOutcome {
  std::string id;
  CaseStatus status = CaseStatus::Used;
  std::string reason;  // set for Excluded / Failed
  std::size_t ecg_outliers = 0;
  std::size_t ppg_outliers = 0;
  double mean_rr_diff_ms = 0.0;
  std::size_t ptt_points = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  bool positive_discarded = false;
};

struct CaseTrace {
  std::string id;
  PTTSeries series;
  OffsetTrace offsets;  // empty for the naive algorithm
};

/// PTT series for one preprocessed case under the configured algorithm.
CaseTrace compute_case_ptt(const std::string& id, const PreprocessedCase& pc, const PipelineConfig& cfg);

/// Preprocessing, PTT and sample construction for one case. Never throws for
/// data problems; those become Failed outcomes.
struct CaseResult {
  CaseOutcome outcome;
  std::vector<Sample> samples;
  std::optional<CaseTrace> trace;
  std::vector<std::string> log;
};

CaseResult process_case(const Case& c, const PipelineConfig& cfg);

struct PipelineResult {
  std::vector<CaseOutcome> cases;  // sorted by id
  std::vector<Sample> dataset;
  std::vector<CaseTrace> traces;
  std::optional<SearchResult> search;
  ForestHyperparams chosen;
  CrossValidationResult cv;
  TrainedForest model;  // refit on the full dataset with `chosen`
  EvaluationReport report;
  std::vector<std::string> log;
};

using LogSink = std::function<void(const std::string&)>;

/// preprocess -> PTT -> samples (per case, in parallel) -> cross-validated
/// forest (optionally random search) -> evaluation on held-out scores.
/// Throws Error(EmptyCorpusAfterExclusion) if no case survives preprocessing.
PipelineResult run_pipeline(const std::vector<Case>& cases, const PipelineConfig& cfg, const LogSink& sink = {});

std::string report_to_json(const PipelineResult& result, const PipelineConfig& cfg);
std::string evaluation_to_json(const EvaluationReport& report);

/// dataset.csv, report.json, roc.csv, model.json, run.log and (optionally)
/// traces/<id>_ptt.csv / traces/<id>_offset.csv under cfg.output_dir.
void write_run_outputs(const PipelineResult& result, const PipelineConfig& cfg);

void write_offset_csv(const std::filesystem::path& path, const OffsetTrace& trace);

}  // namespace pttseize
