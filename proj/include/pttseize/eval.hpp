#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "pttseize/features.hpp"
#include "pttseize/signal_model.hpp"

namespace pttseize {

struct ConfusionMetrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;  // 0 when nothing was predicted positive
  double f1 = 0.0;         // 0 when precision and sensitivity are both 0
};

/// Labels and predictions are 0/1. Needs at least one label of each class;
/// throws Error(ShapeMismatch) on length mismatch and Error(DegenerateLabels)
/// when a class is missing.
ConfusionMetrics confusion_metrics(std::span<const int> labels, std::span<const int> predictions);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // predict positive when score >= threshold
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Sweeps thresholds over the distinct scores in descending order, starting
/// from a sentinel (max score + 1) that yields (0, 0). Tied scores enter
/// together. AUC by the trapezoid rule.
RocCurve roc_curve(std::span<const int> labels, std::span<const double> scores);

/// False alarms per 24 h. Throws Error(InvalidDuration) unless hours > 0.
double false_alarm_rate(std::size_t n_false_positives, double observation_hours);

/// Observation time represented by n negative samples of cfg.sample_len_s.
double negative_observation_hours(std::size_t n_negative_samples, const FeatureConfig& cfg);

/// sample_len / 2 - o_s, in seconds. Throws Error(InvalidLatencyConfig) if
/// negative.
double detection_latency_s(const FeatureConfig& cfg);

struct TypeDetection {
  std::size_t correct = 0;
  std::size_t total = 0;
  double rate = 0.0;
};

/// Counts detected positives per seizure type. Every sample must carry a
/// seizure type (Error(InvalidArgument) otherwise).
std::map<SeizureType, TypeDetection> per_type_breakdown(std::span<const Sample> positives,
                                                        std::span<const int> predictions);

struct MetricSummary {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct EvaluationReport {
  MetricSummary mean;
  MetricSummary stddev;
  std::vector<ConfusionMetrics> folds;  // empty when not cross-validated
  ConfusionMetrics pooled;              // over all scored samples at proba >= 0.5
  RocCurve roc;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  double negative_hours = 0.0;
  double far_per_day = 0.0;
  double detection_latency_s = 0.0;
  std::map<SeizureType, TypeDetection> per_type;
};

/// Everything derivable from scored samples: pooled confusion, ROC, false
/// alarms per day over the negative samples' observation time, latency and
/// the per-type table. `mean` is set from the pooled metrics, `stddev` to 0.
EvaluationReport evaluate_scores(std::span<const Sample> samples, std::span<const double> proba,
                                 const FeatureConfig& cfg);

void write_roc_csv(const std::filesystem::path& path, const RocCurve& roc);

}  // namespace pttseize
