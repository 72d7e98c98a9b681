#include "pttseize/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pttseize/error.hpp"

namespace pttseize {

void PreprocessConfig::validate() const {
  if (!(sigma_factor > 0.0)) throw Error(Errc::InvalidArgument, "preprocess.sigma_factor must be > 0");
  if (!(k_exclusion_ms > 0.0)) throw Error(Errc::InvalidArgument, "preprocess.k_ms must be > 0");
}

SignalTrack remove_outliers(const SignalTrack& track, double sigma_factor) {
  const auto entries = track.entries();
  if (entries.size() < 2) {
    throw Error(Errc::TooShort, "outlier removal needs at least 2 entries, got " + std::to_string(entries.size()));
  }
  const double n = static_cast<double>(entries.size());
  double sum = 0.0;
  for (const auto& e : entries) sum += e.rr;
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& e : entries) ss += (e.rr - mean) * (e.rr - mean);
  const double limit = sigma_factor * std::sqrt(ss / n);

  std::vector<RREntry> kept;
  kept.reserve(entries.size());
  for (const auto& e : entries) {
    if (std::abs(e.rr - mean) <= limit) kept.push_back(e);
  }
  return SignalTrack(track.modality(), std::move(kept), track.start(), track.end());
}

namespace {

SignalTrack clip(const SignalTrack& track, double lo, double hi) {
  std::vector<RREntry> kept;
  for (const auto& e : track.entries()) {
    if (e.t >= lo && e.t <= hi) kept.push_back(e);
  }
  return SignalTrack(track.modality(), std::move(kept), lo, hi);
}

}  // namespace

std::pair<SignalTrack, SignalTrack> clip_to_overlap(const SignalTrack& ecg, const SignalTrack& ppg) {
  if (ecg.empty() || ppg.empty()) throw Error(Errc::EmptyTrack, "cannot clip an empty track");
  const double lo = std::max(ecg.start(), ppg.start());
  const double hi = std::min(ecg.end(), ppg.end());
  if (lo > hi) throw Error(Errc::NoOverlap, "ECG and PPG spans do not intersect");
  return {clip(ecg, lo, hi), clip(ppg, lo, hi)};
}

bool exclude_case(const SignalTrack& ecg, const SignalTrack& ppg, double k_ms) {
  return std::abs(empirical_mean_rr(ecg) - empirical_mean_rr(ppg)) > k_ms;
}

PreprocessedCase preprocess_case(const Case& c, const PreprocessConfig& cfg) {
  cfg.validate();
  auto ecg = remove_outliers(c.ecg(), cfg.sigma_factor);
  auto ppg = remove_outliers(c.ppg(), cfg.sigma_factor);
  const std::size_t ecg_out = c.ecg().size() - ecg.size();
  const std::size_t ppg_out = c.ppg().size() - ppg.size();
  auto [ecg_c, ppg_c] = clip_to_overlap(ecg, ppg);
  const double diff = std::abs(empirical_mean_rr(ecg_c) - empirical_mean_rr(ppg_c));
  const bool excluded = exclude_case(ecg_c, ppg_c, cfg.k_exclusion_ms);
  return {std::move(ecg_c), std::move(ppg_c), ecg_out, ppg_out, diff, excluded};
}

}  // namespace pttseize
