#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pttseize/signal_model.hpp"

namespace pttseize {

/// splitmix64 finalizer; used to derive independent per-case / per-tree seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// A physiological disturbance. Inside [start_s, end_s] the PTT is shifted by
/// ptt_delta_ms and the heart rate by hr_delta_bpm; both ramp in and out over
/// GeneratorSpec::ramp_s outside the interval with a raised cosine.
struct GeneratorEvent {
  double start_s = 0.0;
  double end_s = 0.0;
  double ptt_delta_ms = 0.0;
  double hr_delta_bpm = 0.0;
  SeizureType type = SeizureType::other;
  bool annotated = true;  // false: disturbance without a seizure label
};

struct GeneratorSpec {
  std::string id = "case";
  double duration_s = 3600.0;
  double base_hr_bpm = 75.0;
  double hrv_sigma_ms = 0.0;
  double true_ptt_baseline_ms = 250.0;
  double drift_rate_ms_per_s = 0.0;  // PPG clock runs ahead by this much per second
  double clock_offset_ms = 0.0;      // PPG clock offset at t = 0
  double noise_sigma_ms = 0.0;       // Gaussian jitter on PPG arrival times
  double ppg_rr_bias_ms = 0.0;       // systematic error added to every PPG rr
  double ramp_s = 10.0;
  std::vector<GeneratorEvent> events;
  double dropout = 0.0;  // per-entry removal probability, applied per track
  std::uint64_t seed = 0;

  /// Throws Error(InvalidArgument) on out-of-range fields.
  void validate() const;
};

/// Raised-cosine event envelope: 1 inside [start, end], 0 beyond the ramps.
double event_envelope(const GeneratorEvent& ev, double ramp_s, double t_ms) noexcept;

/// Noise-free physiology at ECG time t_ms.
double true_ptt_at(const GeneratorSpec& spec, double t_ms) noexcept;
double heart_rate_at(const GeneratorSpec& spec, double t_ms) noexcept;
/// Offset of the PPG clock against the ECG clock at ECG time t_ms.
double clock_drift_at(const GeneratorSpec& spec, double t_ms) noexcept;

struct GroundTruthPoint {
  double t = 0.0;  // ECG beat time, ms
  double true_ptt = 0.0;
  double drift = 0.0;
};

struct GroundTruth {
  std::vector<GroundTruthPoint> beats;
  std::vector<GeneratorEvent> events;
};

struct GeneratedCase {
  Case kase;
  GroundTruth truth;
};

/// Seed-deterministic: identical specs produce identical output.
GeneratedCase generate_case(const GeneratorSpec& spec);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-case randomization applied on top of the corpus template. A
/// degenerate range (lo == hi) pins the value.
struct CorpusVariation {
  Range duration_s{3600.0, 3600.0};
  Range base_hr_bpm{75.0, 75.0};
  Range drift_rate_ms_per_s{0.0, 0.0};
  bool random_drift_sign = false;
  Range clock_offset_ms{0.0, 0.0};
  Range ppg_rr_bias_ms{0.0, 0.0};
  Range event_duration_s{60.0, 60.0};
  Range event_ptt_delta_ms{-50.0, -50.0};
  Range event_hr_delta_bpm{0.0, 0.0};
  double event_margin_s = 600.0;  // minimum distance of a seizure from either end
  std::vector<SeizureType> event_types{SeizureType::CPS};
  /// Unannotated disturbances per hour in every case (Poisson mean).
  double confounders_per_hour = 0.0;
  Range confounder_ptt_delta_ms{-20.0, 20.0};
  Range confounder_duration_s{30.0, 120.0};
};

/// round(n_cases * seizure_fraction) cases carry exactly one annotated
/// event; which ones is decided by the corpus seed. Template events are
/// dropped. Case ids are "case_000", "case_001", ...
std::vector<GeneratedCase> generate_corpus(std::size_t n_cases, double seizure_fraction, const GeneratorSpec& tmpl,
                                           std::uint64_t seed, const CorpusVariation& variation = {});

}  // namespace pttseize
