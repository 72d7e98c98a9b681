#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <random>

#include "pttseize/error.hpp"
#include "pttseize/ptt.hpp"
#include "pttseize/synthgen.hpp"
#include "test_util.hpp"

using namespace pttseize;

namespace {

// O(n*m) pairing straight from the definition.
std::vector<PTTEntry> brute_naive(std::span<const RREntry> ecg, std::span<const RREntry> ppg) {
  std::vector<PTTEntry> out;
  for (std::size_t i = 0; i < ecg.size(); ++i) {
    std::optional<double> first;
    for (const auto& p : ppg) {
      if (p.t > ecg[i].t && (!first || p.t < *first)) first = p.t;
    }
    if (!first) continue;
    if (i + 1 < ecg.size() && *first >= ecg[i + 1].t) continue;
    const double ptt = *first - ecg[i].t;
    if (ptt <= ecg[i].rr) out.push_back({ecg[i].t, ptt});
  }
  return out;
}

std::vector<RREntry> random_entries(std::mt19937_64& rng, std::size_t n, double t0, double rr_mean) {
  std::uniform_real_distribution<double> rr(0.4 * rr_mean, 1.6 * rr_mean);
  std::vector<RREntry> e;
  double t = t0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rr(rng);
    e.push_back({t, r});
    t += r;
  }
  return e;
}

}  // namespace

TEST(NaivePTT, HandWorkedExample) {
  const auto ecg = SignalTrack::from_entries(Modality::ECG, {{0, 800}, {800, 800}, {1600, 800}, {2400, 800}});
  const auto ppg = SignalTrack::from_entries(Modality::PPG, {{250, 900}, {1300, 300}, {1610, 900}, {3500, 800}});
  const auto s = naive_ptt(ecg, ppg);
  // The beat at 2400 only finds 3500, 1100 ms later and longer than its RR.
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.entries()[0], (PTTEntry{0, 250}));
  EXPECT_EQ(s.entries()[1], (PTTEntry{800, 500}));
  EXPECT_EQ(s.entries()[2], (PTTEntry{1600, 10}));
}

TEST(NaivePTT, LastBeatStillBoundedByItsRR) {
  const auto ecg = SignalTrack::from_entries(Modality::ECG, {{0, 800}, {800, 500}});
  const auto ppg = SignalTrack::from_entries(Modality::PPG, {{200, 800}, {1400, 800}});
  const auto s = naive_ptt(ecg, ppg);
  ASSERT_EQ(s.size(), 1u);  // 1400 - 800 = 600 > 500
  EXPECT_EQ(s.entries()[0].t, 0);
}

TEST(NaivePTT, SimultaneousTimestampIsNotAMatch) {
  const auto ecg = SignalTrack::from_entries(Modality::ECG, {{0, 800}, {800, 800}});
  const auto ppg = SignalTrack::from_entries(Modality::PPG, {{0, 800}, {800, 800}});
  EXPECT_TRUE(naive_ptt(ecg, ppg).empty());
}

TEST(NaivePTT, MatchesBruteForceOnRandomTracks) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> shift(-500, 500);
  for (int trial = 0; trial < 500; ++trial) {
    const auto ecg = random_entries(rng, 60, 0, 800);
    const auto ppg = random_entries(rng, 60, shift(rng), 800);
    const auto got = naive_ptt(SignalTrack::from_entries(Modality::ECG, ecg),
                               SignalTrack::from_entries(Modality::PPG, ppg));
    const auto want = brute_naive(ecg, ppg);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t k = 0; k < want.size(); ++k) {
      EXPECT_EQ(got.entries()[k], want[k]);
    }
  }
}

TEST(NaivePTT, ConstantDelayRecovered) {
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 800, 100);
  const auto ppg = testutil::regular_track(Modality::PPG, 230, 800, 100);
  const auto s = naive_ptt(ecg, ppg);
  EXPECT_EQ(s.size(), 100u);
  for (const auto& e : s.entries()) EXPECT_DOUBLE_EQ(e.ptt, 230);
}

TEST(ReactivePTT, HugeCReducesToWindowedNaiveMean) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ecg_e = random_entries(rng, 400, 0, 800);
    const auto ppg_e = random_entries(rng, 400, 100, 800);
    const auto ecg = SignalTrack::from_entries(Modality::ECG, ecg_e);
    const auto ppg = SignalTrack::from_entries(Modality::PPG, ppg_e);
    ReactiveConfig cfg;
    cfg.window_s = 30;
    cfg.c = 1e15;
    cfg.availability_frac = 0.2;
    const auto r = reactive_ptt(ecg, ppg, cfg);

    std::size_t k = 0;
    for (const auto& e : ecg_e) {
      const double t1 = e.t + 30000;
      std::vector<RREntry> we, wp;
      for (const auto& x : ecg_e) if (x.t >= e.t && x.t < t1) we.push_back(x);
      for (const auto& x : ppg_e) if (x.t >= e.t && x.t < t1) wp.push_back(x);
      const double need_e = 0.2 * 30000 / empirical_mean_rr(ecg);
      const double need_p = 0.2 * 30000 / empirical_mean_rr(ppg);
      if (we.size() < need_e || wp.size() < need_p) continue;
      const auto pairs = brute_naive(we, wp);
      if (pairs.empty()) continue;
      double sum = 0;
      for (const auto& p : pairs) sum += p.ptt;
      ASSERT_LT(k, r.series.size());
      EXPECT_EQ(r.series.entries()[k].t, e.t);
      EXPECT_NEAR(r.series.entries()[k].ptt, sum / pairs.size(), 1e-6);
      ++k;
    }
    EXPECT_EQ(k, r.series.size());
  }
}

TEST(ReactivePTT, OffsetTraceHasOnePointPerEvaluation) {
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 800, 1000);
  const auto ppg = testutil::regular_track(Modality::PPG, 250, 800, 1000);
  ReactiveConfig cfg;
  cfg.window_s = 60;
  cfg.stride = 3;
  const auto r = reactive_ptt(ecg, ppg, cfg);
  EXPECT_EQ(r.offsets.size(), (1000 + 2) / 3);
  for (std::size_t i = 0; i < r.offsets.size(); ++i) EXPECT_EQ(r.offsets[i].t, ecg.entries()[3 * i].t);
}

TEST(ReactivePTT, SparseWindowsEmitNothingAndHoldOffset) {
  // Beats stop for 10 minutes in the middle of the PPG track.
  std::vector<RREntry> p;
  for (int i = 0; i < 3000; ++i) {
    const double t = 250 + 800.0 * i;
    if (t > 600000 && t < 1200000) continue;
    p.push_back({t, 800});
  }
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 800, 3000);
  const auto ppg = SignalTrack::from_entries(Modality::PPG, p);
  ReactiveConfig cfg;
  cfg.window_s = 60;
  cfg.availability_frac = 0.5;
  const auto r = reactive_ptt(ecg, ppg, cfg);
  for (const auto& e : r.series.entries()) EXPECT_FALSE(e.t > 600000 && e.t + 40000 < 1200000) << e.t;
  for (std::size_t i = 1; i < r.offsets.size(); ++i) {
    const double t = r.offsets[i].t;
    if (t > 600000 && t + 40000 < 1200000) EXPECT_EQ(r.offsets[i].offset, r.offsets[i - 1].offset);
  }
  EXPECT_LT(r.series.size(), r.offsets.size());
}

TEST(ReactivePTT, ConvergesToHalfMeanRR) {
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 800, 6000);
  const auto ppg = testutil::regular_track(Modality::PPG, 100, 800, 6000);
  ReactiveConfig cfg;
  cfg.window_s = 60;
  cfg.c = 20;
  const auto r = reactive_ptt(ecg, ppg, cfg);
  ASSERT_FALSE(r.series.empty());
  EXPECT_NEAR(r.series.entries().back().ptt, 400, 1e-6);
  EXPECT_NEAR(r.offsets.back().offset, 300, 1e-6);
}

TEST(ReactivePTT, EmptyTrackThrows) {
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 800, 10);
  try {
    reactive_ptt(ecg, SignalTrack::from_entries(Modality::PPG, {}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyTrack);
  }
}

TEST(ReactiveConfig, Validation) {
  ReactiveConfig cfg;
  cfg.c = 0.5;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.availability_frac = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.stride = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.window_s = -1;
  EXPECT_THROW(cfg.validate(), Error);
}
