#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pttseize {

// All times are real-valued milliseconds relative to the case epoch.

/// One heartbeat event: the start time of an RR interval and its length.
struct RREntry {
  double t = 0.0;
  double rr = 0.0;

  friend bool operator==(const RREntry&, const RREntry&) = default;
};

enum class Modality { ECG, PPG };

std::string_view modality_name(Modality m) noexcept;

/// Ordered RR stream for a single modality.
///
/// Construction validates the track: timestamps finite and strictly
/// increasing, every rr finite and positive, and start <= first t,
/// last t <= end. Throws Error(UnsortedTrack) for ordering violations and
/// Error(InvalidArgument) for the rest.
class SignalTrack {
 public:
  SignalTrack(Modality modality, std::vector<RREntry> entries, double start, double end);

  /// Track whose span is [first t, last t] (or [0, 0] when empty).
  static SignalTrack from_entries(Modality modality, std::vector<RREntry> entries);

  Modality modality() const noexcept { return modality_; }
  std::span<const RREntry> entries() const noexcept { return entries_; }
  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const SignalTrack&, const SignalTrack&) = default;

 private:
  Modality modality_;
  std::vector<RREntry> entries_;
  double start_;
  double end_;
};

enum class SeizureType { GTCS, tonic, atonic, CPS, SPS, absence, aura, myoclonic, other };

std::string_view seizure_type_name(SeizureType type) noexcept;

struct ParsedSeizureType {
  SeizureType type;
  bool known;
};

/// Unknown names map to SeizureType::other with known = false.
ParsedSeizureType parse_seizure_type(std::string_view name) noexcept;

struct SeizureAnnotation {
  double start = 0.0;
  double end = 0.0;
  SeizureType type = SeizureType::other;

  friend bool operator==(const SeizureAnnotation&, const SeizureAnnotation&) = default;
};

/// A paired ECG+PPG recording. Seizure times are on the ECG clock.
class Case {
 public:
  Case(std::string id, SignalTrack ecg, SignalTrack ppg, std::vector<SeizureAnnotation> seizures,
       std::string epoch_iso8601 = {});

  const std::string& id() const noexcept { return id_; }
  const SignalTrack& ecg() const noexcept { return ecg_; }
  const SignalTrack& ppg() const noexcept { return ppg_; }
  std::span<const SeizureAnnotation> seizures() const noexcept { return seizures_; }
  const std::string& epoch_iso8601() const noexcept { return epoch_; }
  bool has_seizure() const noexcept { return !seizures_.empty(); }

  friend bool operator==(const Case&, const Case&) = default;

 private:
  std::string id_;
  SignalTrack ecg_;
  SignalTrack ppg_;
  std::vector<SeizureAnnotation> seizures_;
  std::string epoch_;
};

enum class PTTKind { Naive, Reactive };

struct PTTEntry {
  double t = 0.0;
  double ptt = 0.0;

  friend bool operator==(const PTTEntry&, const PTTEntry&) = default;
};

/// Time-stamped PTT values. Timestamps strictly increase; naive values are
/// strictly positive.
class PTTSeries {
 public:
  PTTSeries(PTTKind kind, std::vector<PTTEntry> entries);

  PTTKind kind() const noexcept { return kind_; }
  std::span<const PTTEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Entries with t in [lo, hi).
  std::span<const PTTEntry> slice(double lo, double hi) const noexcept;

 private:
  PTTKind kind_;
  std::vector<PTTEntry> entries_;
};

/// Arithmetic mean of rr over the whole track. Throws Error(EmptyTrack).
double empirical_mean_rr(const SignalTrack& track);

}  // namespace pttseize
