#include "pttseize/eval.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pttseize/error.hpp"
#include "pttseize/io.hpp"

namespace pttseize {

ConfusionMetrics confusion_metrics(std::span<const int> labels, std::span<const int> predictions) {
  if (labels.size() != predictions.size()) {
    throw Error(Errc::ShapeMismatch, "labels and predictions differ in length");
  }
  ConfusionMetrics m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool pos = labels[i] != 0;
    const bool hit = predictions[i] != 0;
    if (pos && hit) ++m.tp;
    else if (pos) ++m.fn;
    else if (hit) ++m.fp;
    else ++m.tn;
  }
  if (m.tp + m.fn == 0 || m.tn + m.fp == 0) {
    throw Error(Errc::DegenerateLabels, "confusion metrics need both classes present");
  }
  m.sensitivity = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  m.specificity = static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp);
  m.precision = m.tp + m.fp == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  const double denom = m.precision + m.sensitivity;
  m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.sensitivity / denom;
  return m;
}

RocCurve roc_curve(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw Error(Errc::ShapeMismatch, "labels and scores differ in length");
  const auto n_pos = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; }));
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(Errc::DegenerateLabels, "ROC needs both classes present");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0, scores[order.front()] + 1.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double thr = scores[order[k]];
    while (k < order.size() && scores[order[k]] == thr) {
      if (labels[order[k]] != 0) ++tp;
      else ++fp;
      ++k;
    }
    roc.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                          static_cast<double>(tp) / static_cast<double>(n_pos), thr});
  }
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto& a = roc.points[i - 1];
    const auto& b = roc.points[i];
    roc.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return roc;
}

double false_alarm_rate(std::size_t n_false_positives, double observation_hours) {
  if (!(observation_hours > 0.0)) throw Error(Errc::InvalidDuration, "observation hours must be > 0");
  return static_cast<double>(n_false_positives) / (observation_hours / 24.0);
}

double negative_observation_hours(std::size_t n_negative_samples, const FeatureConfig& cfg) {
  return static_cast<double>(n_negative_samples) * cfg.sample_len_s / 3600.0;
}

double detection_latency_s(const FeatureConfig& cfg) {
  const double latency = cfg.sample_len_s / 2.0 - cfg.o_s_s;
  if (latency < 0.0) throw Error(Errc::InvalidLatencyConfig, "o_s exceeds half the sample length");
  return latency;
}

std::map<SeizureType, TypeDetection> per_type_breakdown(std::span<const Sample> positives,
                                                        std::span<const int> predictions) {
  if (positives.size() != predictions.size()) throw Error(Errc::ShapeMismatch, "samples and predictions differ");
  std::map<SeizureType, TypeDetection> out;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    if (!positives[i].seizure_type) throw Error(Errc::InvalidArgument, "positive sample without seizure type");
    auto& row = out[*positives[i].seizure_type];
    ++row.total;
    if (predictions[i] != 0) ++row.correct;
  }
  for (auto& [type, row] : out) row.rate = static_cast<double>(row.correct) / static_cast<double>(row.total);
  return out;
}

EvaluationReport evaluate_scores(std::span<const Sample> samples, std::span<const double> proba,
                                 const FeatureConfig& cfg) {
  if (samples.size() != proba.size()) throw Error(Errc::ShapeMismatch, "samples and scores differ in length");
  std::vector<int> labels, preds;
  std::vector<Sample> positives;
  std::vector<int> positive_preds;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    labels.push_back(samples[i].label != 0 ? 1 : 0);
    preds.push_back(proba[i] >= 0.5 ? 1 : 0);
    if (labels.back() == 1) {
      positives.push_back(samples[i]);
      positive_preds.push_back(preds.back());
    }
  }
  EvaluationReport r;
  r.pooled = confusion_metrics(labels, preds);
  r.mean = {r.pooled.sensitivity, r.pooled.specificity, r.pooled.precision, r.pooled.f1};
  r.roc = roc_curve(labels, proba);
  r.n_positive = r.pooled.tp + r.pooled.fn;
  r.n_negative = r.pooled.tn + r.pooled.fp;
  r.negative_hours = negative_observation_hours(r.n_negative, cfg);
  r.far_per_day = false_alarm_rate(r.pooled.fp, r.negative_hours);
  r.detection_latency_s = detection_latency_s(cfg);
  r.per_type = per_type_breakdown(positives, positive_preds);
  return r;
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& roc) {
  std::ostringstream out;
  out << "fpr,tpr,threshold\n";
  for (const auto& p : roc.points) {
    out << format_number(p.fpr) << ',' << format_number(p.tpr) << ',' << format_number(p.threshold) << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace pttseize
