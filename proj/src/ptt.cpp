#include "pttseize/ptt.hpp"

#include <algorithm>
#include <cmath>

#include "pttseize/error.hpp"

namespace pttseize {

void ReactiveConfig::validate() const {
  if (!(window_s > 0.0)) throw Error(Errc::InvalidArgument, "reactive.window_s must be > 0");
  if (!(c >= 1.0)) throw Error(Errc::InvalidArgument, "reactive.c must be >= 1");
  if (!(availability_frac > 0.0 && availability_frac <= 1.0)) {
    throw Error(Errc::InvalidArgument, "reactive.availability_frac must be in (0, 1]");
  }
  if (stride < 1) throw Error(Errc::InvalidArgument, "reactive.stride must be >= 1");
}

PTTSeries naive_ptt(const SignalTrack& ecg, const SignalTrack& ppg) {
  std::vector<PTTEntry> out;
  out.reserve(ecg.size());
  match_ptt(ecg.entries(), ppg.entries(), 0.0, [&](double t, double ptt) { out.push_back({t, ptt}); });
  return PTTSeries(PTTKind::Naive, std::move(out));
}

namespace {

std::size_t first_at_or_after(std::span<const RREntry> entries, std::size_t from, double t) {
  auto it = std::lower_bound(entries.begin() + static_cast<std::ptrdiff_t>(from), entries.end(), t,
                             [](const RREntry& e, double v) { return e.t < v; });
  return static_cast<std::size_t>(it - entries.begin());
}

}  // namespace

ReactiveResult reactive_ptt(const SignalTrack& ecg, const SignalTrack& ppg, const ReactiveConfig& cfg) {
  cfg.validate();
  const double mean_ecg = empirical_mean_rr(ecg);
  const double mean_ppg = empirical_mean_rr(ppg);
  const double window_ms = cfg.window_s * 1000.0;
  const double need_ecg = cfg.availability_frac * window_ms / mean_ecg;
  const double need_ppg = cfg.availability_frac * window_ms / mean_ppg;
  const double target = mean_ecg / 2.0;

  const auto e = ecg.entries();
  const auto p = ppg.entries();

  std::vector<PTTEntry> points;
  OffsetTrace trace;
  points.reserve(e.size() / cfg.stride + 1);
  trace.reserve(e.size() / cfg.stride + 1);

  double offset = 0.0;
  for (std::size_t i = 0; i < e.size(); i += cfg.stride) {
    const double t0 = e[i].t;
    const double t1 = t0 + window_ms;
    const std::size_t e_end = first_at_or_after(e, i, t1);
    const std::size_t p_begin = first_at_or_after(p, 0, t0 - offset);
    const std::size_t p_end = first_at_or_after(p, p_begin, t1 - offset);
    const auto n_ecg = static_cast<double>(e_end - i);
    const auto n_ppg = static_cast<double>(p_end - p_begin);

    if (n_ecg >= need_ecg && n_ppg >= need_ppg) {
      double sum = 0.0;
      std::size_t n = 0;
      match_ptt(e.subspan(i, e_end - i), p.subspan(p_begin, p_end - p_begin), offset, [&](double, double ptt) {
        sum += ptt;
        ++n;
      });
      if (n > 0) {
        const double w = sum / static_cast<double>(n);
        points.push_back({t0, w});
        offset += (target - w) / cfg.c;
      }
    }
    trace.push_back({t0, offset});
  }
  return {PTTSeries(PTTKind::Reactive, std::move(points)), std::move(trace)};
}

}  // namespace pttseize
