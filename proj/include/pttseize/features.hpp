#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pttseize/signal_model.hpp"

namespace pttseize {

struct FeatureConfig {
  double sample_len_s = 480.0;
  int n_windows = 2;
  double o_s_s = 30.0;  // shift of positive samples past the seizure middle

  void validate() const;
};

/// One training pair.
struct Sample {
  std::vector<double> features;
  int label = 0;
  std::string case_id;
  double t_center_ms = 0.0;
  std::optional<SeizureType> seizure_type;
};

/// Per window: mean, min, max, variance, slope, intercept; then mean_i - mean_j
/// for every i < j.
std::size_t feature_count(int n_windows);
std::vector<std::string> feature_names(int n_windows);

/// Splits [start_ms, start_ms + len_ms) into n_windows equal-duration windows
/// and emits the statistics above. Variance is the population variance; slope
/// and intercept come from least squares of ptt against seconds since the
/// window start. Throws Error(SparseWindow) when a window has < 2 points.
std::vector<double> window_features(std::span<const PTTEntry> segment, double start_ms, double len_ms,
                                    int n_windows);

/// Positive sample centred at the seizure middle plus o_s. Returns nullopt
/// when the sample interval leaves the series or a window is too sparse.
std::optional<Sample> make_positive_sample(const PTTSeries& series, const SeizureAnnotation& seizure,
                                           const FeatureConfig& cfg, const std::string& case_id = {});

/// Back-to-back sample intervals from the first timestamp; intervals that do
/// not fit or have a sparse window are skipped.
std::vector<Sample> make_negative_samples(const PTTSeries& series, const FeatureConfig& cfg,
                                          const std::string& case_id = {});

// Dataset CSV: feature columns, label, case_id, t_center_ms, seizure_type.
void write_dataset_csv(const std::filesystem::path& path, std::span<const Sample> samples, int n_windows);
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<Sample> samples;
};
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace pttseize
