#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pttseize/signal_model.hpp"

namespace pttseize {

/// Parameters of the drift-compensating estimator.
///
/// Each evaluation moves the PPG offset by 1/c of the gap between the window
/// mean and half the mean ECG RR length, so the compensation time constant is
/// roughly c * stride * mean_rr. It has to be comparable to window_s for PTT
/// alterations to survive in the output.
struct ReactiveConfig {
  double window_s = 300.0;
  double c = 300.0;
  double availability_frac = 0.2;
  std::size_t stride = 1;

  void validate() const;
};

struct OffsetPoint {
  double t = 0.0;       // evaluation time (ECG clock), ms
  double offset = 0.0;  // cumulative shift applied to PPG timestamps, ms
};

using OffsetTrace = std::vector<OffsetPoint>;

/// Pairs each ECG entry with the first PPG entry strictly after it and before
/// the next ECG entry, emitting (t_ECG, t_PPG - t_ECG). Pairs whose PTT
/// exceeds RR_ECG are dropped. At most one output per ECG entry.
PTTSeries naive_ptt(const SignalTrack& ecg, const SignalTrack& ppg);

/// Callback form of the matcher over raw entry spans, with `ppg_shift` added
/// to every PPG timestamp. The last ECG entry in `ecg` has no successor, so
/// only the RR_ECG rule bounds its match.
template <typename Emit>
void match_ptt(std::span<const RREntry> ecg, std::span<const RREntry> ppg, double ppg_shift, Emit&& emit) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < ecg.size(); ++i) {
    const double t_ecg = ecg[i].t;
    while (j < ppg.size() && ppg[j].t + ppg_shift <= t_ecg) ++j;
    if (j == ppg.size()) return;
    const double t_ppg = ppg[j].t + ppg_shift;
    if (i + 1 < ecg.size() && !(t_ppg < ecg[i + 1].t)) continue;
    const double ptt = t_ppg - t_ecg;
    if (ptt > ecg[i].rr) continue;
    emit(t_ecg, ptt);
  }
}

struct ReactiveResult {
  PTTSeries series;
  OffsetTrace offsets;
};

/// Windowed, drift-compensating PTT. Evaluated at every `stride`-th ECG
/// entry over the following window_s seconds of both tracks; PPG timestamps
/// carry the running offset. A window contributes a point only when both
/// tracks hold at least availability_frac of their expected beat count, and
/// only then is the offset moved by (mean_rr_ecg / 2 - w) / c.
/// Throws Error(EmptyTrack) if either track is empty.
ReactiveResult reactive_ptt(const SignalTrack& ecg, const SignalTrack& ppg, const ReactiveConfig& cfg);

}  // namespace pttseize
