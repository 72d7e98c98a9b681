#include "pttseize/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pttseize/error.hpp"

namespace pttseize {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void GeneratorSpec::validate() const {
  if (!(duration_s > 0.0)) throw Error(Errc::InvalidArgument, "generator: duration_s must be > 0");
  if (!(base_hr_bpm > 0.0)) throw Error(Errc::InvalidArgument, "generator: base_hr_bpm must be > 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error(Errc::InvalidArgument, "generator: dropout must be in [0, 1)");
  if (hrv_sigma_ms < 0.0 || noise_sigma_ms < 0.0 || ramp_s < 0.0) {
    throw Error(Errc::InvalidArgument, "generator: sigmas and ramp must be non-negative");
  }
  if (!(true_ptt_baseline_ms > 0.0)) throw Error(Errc::InvalidArgument, "generator: true_ptt_baseline_ms must be > 0");
  for (const auto& ev : events) {
    if (!(ev.start_s < ev.end_s)) throw Error(Errc::InvalidArgument, "generator: event start must precede end");
  }
}

double event_envelope(const GeneratorEvent& ev, double ramp_s, double t_ms) noexcept {
  const double t = t_ms / 1000.0;
  if (t >= ev.start_s && t <= ev.end_s) return 1.0;
  if (ramp_s <= 0.0) return 0.0;
  const double dist = t < ev.start_s ? ev.start_s - t : t - ev.end_s;
  if (dist >= ramp_s) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * dist / ramp_s));
}

double true_ptt_at(const GeneratorSpec& spec, double t_ms) noexcept {
  double v = spec.true_ptt_baseline_ms;
  for (const auto& ev : spec.events) v += ev.ptt_delta_ms * event_envelope(ev, spec.ramp_s, t_ms);
  return v;
}

double heart_rate_at(const GeneratorSpec& spec, double t_ms) noexcept {
  double v = spec.base_hr_bpm;
  for (const auto& ev : spec.events) v += ev.hr_delta_bpm * event_envelope(ev, spec.ramp_s, t_ms);
  return v;
}

double clock_drift_at(const GeneratorSpec& spec, double t_ms) noexcept {
  return spec.clock_offset_ms + spec.drift_rate_ms_per_s * t_ms / 1000.0;
}

namespace {

constexpr double kMinBeatInterval = 250.0;
constexpr const char* kEpoch = "2000-01-01T00:00:00Z";

std::vector<RREntry> apply_dropout(std::vector<RREntry> entries, double dropout, std::mt19937_64& rng) {
  if (dropout <= 0.0) return entries;
  std::bernoulli_distribution drop(dropout);
  std::vector<RREntry> kept;
  kept.reserve(entries.size());
  for (const auto& e : entries) {
    if (!drop(rng)) kept.push_back(e);
  }
  return kept;
}

}  // namespace

GeneratedCase generate_case(const GeneratorSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const double duration_ms = spec.duration_s * 1000.0;

  // Beat times on the ECG clock; one beat past the end closes the last interval.
  std::vector<double> beats{0.0};
  std::normal_distribution<double> hrv(0.0, spec.hrv_sigma_ms > 0.0 ? spec.hrv_sigma_ms : 1.0);
  while (beats.back() <= duration_ms) {
    const double t = beats.back();
    double interval = 60000.0 / std::max(heart_rate_at(spec, t), 1.0);
    if (spec.hrv_sigma_ms > 0.0) interval += hrv(rng);
    beats.push_back(t + std::max(interval, kMinBeatInterval));
  }

  std::normal_distribution<double> jitter(0.0, spec.noise_sigma_ms > 0.0 ? spec.noise_sigma_ms : 1.0);
  std::vector<double> arrivals(beats.size());
  for (std::size_t k = 0; k < beats.size(); ++k) {
    double a = beats[k] + true_ptt_at(spec, beats[k]) + clock_drift_at(spec, beats[k]);
    if (spec.noise_sigma_ms > 0.0) a += jitter(rng);
    if (k > 0 && a <= arrivals[k - 1]) a = arrivals[k - 1] + 1.0;
    arrivals[k] = a;
  }

  std::vector<RREntry> ecg;
  GroundTruth truth;
  for (std::size_t k = 0; k + 1 < beats.size(); ++k) {
    ecg.push_back({beats[k], beats[k + 1] - beats[k]});
    truth.beats.push_back({beats[k], true_ptt_at(spec, beats[k]), clock_drift_at(spec, beats[k])});
  }
  std::vector<RREntry> ppg;
  for (std::size_t k = 0; k + 1 < arrivals.size(); ++k) {
    if (arrivals[k] < 0.0 || arrivals[k] > duration_ms) continue;
    ppg.push_back({arrivals[k], std::max(arrivals[k + 1] - arrivals[k] + spec.ppg_rr_bias_ms, 1.0)});
  }
  ecg = apply_dropout(std::move(ecg), spec.dropout, rng);
  ppg = apply_dropout(std::move(ppg), spec.dropout, rng);

  auto ecg_track = SignalTrack::from_entries(Modality::ECG, std::move(ecg));
  auto ppg_track = SignalTrack::from_entries(Modality::PPG, std::move(ppg));

  // Annotations are clamped to the recorded span so the case always validates.
  const double lo = std::min(ecg_track.start(), ppg_track.start());
  const double hi = std::max(ecg_track.end(), ppg_track.end());
  std::vector<SeizureAnnotation> seizures;
  for (const auto& ev : spec.events) {
    if (!ev.annotated) continue;
    const double s = std::max(ev.start_s * 1000.0, lo);
    const double e = std::min(ev.end_s * 1000.0, hi);
    if (s < e) seizures.push_back({s, e, ev.type});
  }
  std::sort(seizures.begin(), seizures.end(),
            [](const SeizureAnnotation& a, const SeizureAnnotation& b) { return a.start < b.start; });
  truth.events = spec.events;

  return {Case(spec.id, std::move(ecg_track), std::move(ppg_track), std::move(seizures), kEpoch), std::move(truth)};
}

namespace {

double draw(const Range& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return r.lo + (r.hi - r.lo) * u(rng);
}

std::string case_id(std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::max<std::size_t>(3, std::to_string(n > 0 ? n - 1 : 0).size());
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "case_" + digits;
}

}  // namespace

std::vector<GeneratedCase> generate_corpus(std::size_t n_cases, double seizure_fraction, const GeneratorSpec& tmpl,
                                           std::uint64_t seed, const CorpusVariation& variation) {
  if (!(seizure_fraction >= 0.0 && seizure_fraction <= 1.0)) {
    throw Error(Errc::InvalidArgument, "seizure_fraction must be in [0, 1]");
  }
  if (variation.event_types.empty()) throw Error(Errc::InvalidArgument, "corpus: event_types is empty");

  const auto n_seizure = static_cast<std::size_t>(std::llround(static_cast<double>(n_cases) * seizure_fraction));
  std::vector<std::size_t> order(n_cases);
  for (std::size_t i = 0; i < n_cases; ++i) order[i] = i;
  std::mt19937_64 pick(mix_seed(seed, 0xC0FFEE));
  std::shuffle(order.begin(), order.end(), pick);
  std::vector<bool> has_seizure(n_cases, false);
  for (std::size_t i = 0; i < n_seizure; ++i) has_seizure[order[i]] = true;

  std::vector<GeneratedCase> corpus;
  corpus.reserve(n_cases);
  for (std::size_t i = 0; i < n_cases; ++i) {
    const std::uint64_t case_seed = mix_seed(seed, i);
    std::mt19937_64 rng(case_seed);
    GeneratorSpec spec = tmpl;
    spec.id = case_id(i, n_cases);
    spec.seed = mix_seed(case_seed, 1);
    spec.events.clear();
    spec.duration_s = draw(variation.duration_s, rng);
    spec.base_hr_bpm = draw(variation.base_hr_bpm, rng);
    spec.drift_rate_ms_per_s = draw(variation.drift_rate_ms_per_s, rng);
    if (variation.random_drift_sign && std::bernoulli_distribution(0.5)(rng)) {
      spec.drift_rate_ms_per_s = -spec.drift_rate_ms_per_s;
    }
    spec.clock_offset_ms = draw(variation.clock_offset_ms, rng);
    spec.ppg_rr_bias_ms = draw(variation.ppg_rr_bias_ms, rng);

    if (has_seizure[i]) {
      GeneratorEvent ev;
      const double len = draw(variation.event_duration_s, rng);
      const double earliest = variation.event_margin_s;
      const double latest = std::max(earliest, spec.duration_s - variation.event_margin_s - len);
      ev.start_s = draw({earliest, latest}, rng);
      ev.end_s = ev.start_s + len;
      ev.ptt_delta_ms = draw(variation.event_ptt_delta_ms, rng);
      ev.hr_delta_bpm = draw(variation.event_hr_delta_bpm, rng);
      std::uniform_int_distribution<std::size_t> type_pick(0, variation.event_types.size() - 1);
      ev.type = variation.event_types[type_pick(rng)];
      spec.events.push_back(ev);
    }
    if (variation.confounders_per_hour > 0.0) {
      std::poisson_distribution<int> count(variation.confounders_per_hour * spec.duration_s / 3600.0);
      const int n_conf = count(rng);
      for (int k = 0; k < n_conf; ++k) {
        GeneratorEvent ev;
        const double len = draw(variation.confounder_duration_s, rng);
        ev.start_s = draw({0.0, std::max(0.0, spec.duration_s - len)}, rng);
        ev.end_s = ev.start_s + len;
        ev.ptt_delta_ms = draw(variation.confounder_ptt_delta_ms, rng);
        ev.annotated = false;
        spec.events.push_back(ev);
      }
    }
    corpus.push_back(generate_case(spec));
  }
  return corpus;
}

}  // namespace pttseize
