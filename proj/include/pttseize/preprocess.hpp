#pragma once

#include <cstddef>
#include <utility>

#include "pttseize/signal_model.hpp"

namespace pttseize {

struct PreprocessConfig {
  double sigma_factor = 2.0;
  double k_exclusion_ms = 200.0;

  /// Throws Error(InvalidArgument) unless both fields are positive.
  void validate() const;
};

/// Keeps exactly the entries with |rr - mean| <= sigma_factor * std, where
/// mean and population std are taken once over the whole input track.
/// Throws Error(TooShort) for fewer than two entries.
SignalTrack remove_outliers(const SignalTrack& track, double sigma_factor);

/// Restricts both tracks to [max(starts), min(ends)] and sets that interval
/// as their span. Throws Error(NoOverlap) when the interval is empty.
std::pair<SignalTrack, SignalTrack> clip_to_overlap(const SignalTrack& ecg, const SignalTrack& ppg);

/// True when the mean RR lengths differ by strictly more than k_ms.
bool exclude_case(const SignalTrack& ecg, const SignalTrack& ppg, double k_ms);

struct PreprocessedCase {
  SignalTrack ecg;
  SignalTrack ppg;
  std::size_t ecg_outliers = 0;
  std::size_t ppg_outliers = 0;
  double mean_rr_diff_ms = 0.0;  // |mean(ecg) - mean(ppg)| after clipping
  bool excluded = false;
};

/// Outlier removal per track, then clipping, then the k-rule on the clipped
/// tracks.
PreprocessedCase preprocess_case(const Case& c, const PreprocessConfig& cfg);

}  // namespace pttseize
