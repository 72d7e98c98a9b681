#include "pttseize/signal_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "pttseize/error.hpp"

namespace pttseize {

std::string_view modality_name(Modality m) noexcept {
  return m == Modality::ECG ? "ECG" : "PPG";
}

SignalTrack::SignalTrack(Modality modality, std::vector<RREntry> entries, double start, double end)
    : modality_(modality), entries_(std::move(entries)), start_(start), end_(end) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const RREntry& e = entries_[i];
    if (!std::isfinite(e.t)) {
      throw Error(Errc::InvalidArgument, "non-finite timestamp at entry " + std::to_string(i));
    }
    if (!std::isfinite(e.rr) || e.rr <= 0.0) {
      throw Error(Errc::InvalidArgument, "rr must be positive at entry " + std::to_string(i));
    }
    if (i > 0 && !(entries_[i - 1].t < e.t)) {
      throw Error(Errc::UnsortedTrack, "timestamps not strictly increasing at entry " + std::to_string(i));
    }
  }
  if (!std::isfinite(start_) || !std::isfinite(end_) || start_ > end_) {
    throw Error(Errc::InvalidArgument, "track span must be finite with start <= end");
  }
  if (!entries_.empty() && (entries_.front().t < start_ || entries_.back().t > end_)) {
    throw Error(Errc::InvalidArgument, "entries outside the track span");
  }
}

SignalTrack SignalTrack::from_entries(Modality modality, std::vector<RREntry> entries) {
  const double start = entries.empty() ? 0.0 : entries.front().t;
  const double end = entries.empty() ? 0.0 : entries.back().t;
  return SignalTrack(modality, std::move(entries), start, end);
}

namespace {

constexpr std::array<std::pair<SeizureType, std::string_view>, 9> kSeizureNames{{
    {SeizureType::GTCS, "GTCS"},
    {SeizureType::tonic, "tonic"},
    {SeizureType::atonic, "atonic"},
    {SeizureType::CPS, "CPS"},
    {SeizureType::SPS, "SPS"},
    {SeizureType::absence, "absence"},
    {SeizureType::aura, "aura"},
    {SeizureType::myoclonic, "myoclonic"},
    {SeizureType::other, "other"},
}};

}  // namespace

std::string_view seizure_type_name(SeizureType type) noexcept {
  for (const auto& [t, name] : kSeizureNames) {
    if (t == type) return name;
  }
  return "other";
}

ParsedSeizureType parse_seizure_type(std::string_view name) noexcept {
  for (const auto& [t, n] : kSeizureNames) {
    if (n == name) return {t, true};
  }
  return {SeizureType::other, false};
}

Case::Case(std::string id, SignalTrack ecg, SignalTrack ppg, std::vector<SeizureAnnotation> seizures,
           std::string epoch_iso8601)
    : id_(std::move(id)),
      ecg_(std::move(ecg)),
      ppg_(std::move(ppg)),
      seizures_(std::move(seizures)),
      epoch_(std::move(epoch_iso8601)) {
  if (ecg_.modality() != Modality::ECG || ppg_.modality() != Modality::PPG) {
    throw Error(Errc::InvalidArgument, "case " + id_ + ": track modalities swapped");
  }
  const double lo = std::min(ecg_.start(), ppg_.start());
  const double hi = std::max(ecg_.end(), ppg_.end());
  for (const auto& s : seizures_) {
    if (!(s.start < s.end)) {
      throw Error(Errc::InvalidArgument, "case " + id_ + ": seizure start must precede end");
    }
    if (s.start < lo || s.end > hi) {
      throw Error(Errc::InvalidArgument, "case " + id_ + ": seizure outside recorded span");
    }
  }
}

PTTSeries::PTTSeries(PTTKind kind, std::vector<PTTEntry> entries)
    : kind_(kind), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i].t) || !std::isfinite(entries_[i].ptt)) {
      throw Error(Errc::InvalidArgument, "non-finite PTT entry " + std::to_string(i));
    }
    if (i > 0 && !(entries_[i - 1].t < entries_[i].t)) {
      throw Error(Errc::UnsortedTrack, "PTT timestamps not strictly increasing");
    }
    if (kind_ == PTTKind::Naive && entries_[i].ptt <= 0.0) {
      throw Error(Errc::InvalidArgument, "naive PTT must be positive");
    }
  }
}

std::span<const PTTEntry> PTTSeries::slice(double lo, double hi) const noexcept {
  auto by_time = [](const PTTEntry& e, double t) { return e.t < t; };
  auto first = std::lower_bound(entries_.begin(), entries_.end(), lo, by_time);
  auto last = std::lower_bound(first, entries_.end(), hi, by_time);
  return {first, last};
}

double empirical_mean_rr(const SignalTrack& track) {
  if (track.empty()) {
    throw Error(Errc::EmptyTrack, std::string(modality_name(track.modality())) + " track has no entries");
  }
  double sum = 0.0;
  for (const auto& e : track.entries()) sum += e.rr;
  return sum / static_cast<double>(track.size());
}

}  // namespace pttseize
