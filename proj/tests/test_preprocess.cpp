#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pttseize/error.hpp"
#include "pttseize/preprocess.hpp"
#include "test_util.hpp"

using namespace pttseize;

namespace {

// Two-pass reference: population mean/std over the input, keep |x - mean| <= f*std.
std::vector<RREntry> reference_outlier_filter(std::span<const RREntry> e, double f) {
  long double mean = 0;
  for (const auto& x : e) mean += x.rr;
  mean /= e.size();
  long double var = 0;
  for (const auto& x : e) var += (x.rr - mean) * (x.rr - mean);
  const double sd = std::sqrt(static_cast<double>(var / e.size()));
  std::vector<RREntry> kept;
  for (const auto& x : e) {
    if (std::abs(x.rr - static_cast<double>(mean)) <= f * sd) kept.push_back(x);
  }
  return kept;
}

}  // namespace

TEST(RemoveOutliers, DropsTheObviousSpike) {
  const auto t = testutil::track_from_rr(Modality::ECG, 0, {800, 810, 790, 805, 795, 800, 2400, 800, 810, 790});
  const auto kept = remove_outliers(t, 2.0);
  EXPECT_EQ(kept.size(), 9u);
  for (const auto& e : kept.entries()) EXPECT_LT(e.rr, 1000);
  EXPECT_EQ(kept.start(), t.start());
  EXPECT_EQ(kept.end(), t.end());
}

TEST(RemoveOutliers, MatchesReferenceOnRandomTracks) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> rr(800, 60);
  std::bernoulli_distribution spike(0.03);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v;
    for (int i = 0; i < 300; ++i) v.push_back(std::max(50.0, rr(rng) + (spike(rng) ? 900 : 0)));
    const auto t = testutil::track_from_rr(Modality::PPG, 0, v);
    const auto kept = remove_outliers(t, 2.0);
    const auto ref = reference_outlier_filter(t.entries(), 2.0);
    ASSERT_EQ(kept.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(kept.entries()[i], ref[i]);
  }
}

TEST(RemoveOutliers, ConstantTrackKeepsEverything) {
  const auto t = testutil::regular_track(Modality::ECG, 0, 750, 40);
  EXPECT_EQ(remove_outliers(t, 2.0).size(), 40u);
}

TEST(RemoveOutliers, NeedsTwoEntries) {
  try {
    remove_outliers(testutil::regular_track(Modality::ECG, 0, 800, 1), 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooShort);
  }
}

TEST(ClipToOverlap, KeepsIntersectionOnly) {
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 1000, 11);     // 0..10000
  const auto ppg = testutil::regular_track(Modality::PPG, 3500, 1000, 11);  // 3500..13500
  const auto [e, p] = clip_to_overlap(ecg, ppg);
  EXPECT_EQ(e.start(), 3500);
  EXPECT_EQ(e.end(), 10000);
  EXPECT_EQ(p.start(), 3500);
  EXPECT_EQ(p.end(), 10000);
  EXPECT_EQ(e.entries().front().t, 4000);
  EXPECT_EQ(e.entries().back().t, 10000);
  EXPECT_EQ(p.entries().front().t, 3500);
  EXPECT_EQ(p.entries().back().t, 9500);
}

TEST(ClipToOverlap, DisjointSpansFail) {
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 1000, 5);
  const auto ppg = testutil::regular_track(Modality::PPG, 10000, 1000, 5);
  try {
    clip_to_overlap(ecg, ppg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoOverlap);
  }
  try {
    clip_to_overlap(ecg, SignalTrack::from_entries(Modality::PPG, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyTrack);
  }
}

TEST(ExcludeCase, ThresholdIsStrict) {
  const auto ecg = testutil::regular_track(Modality::ECG, 0, 800, 10);
  EXPECT_FALSE(exclude_case(ecg, testutil::regular_track(Modality::PPG, 0, 1000, 10), 200));
  EXPECT_TRUE(exclude_case(ecg, testutil::regular_track(Modality::PPG, 0, 1000.5, 10), 200));
  EXPECT_TRUE(exclude_case(ecg, testutil::regular_track(Modality::PPG, 0, 599, 10), 200));
}

TEST(PreprocessCase, OutliersThenClipThenRule) {
  std::vector<double> ecg_rr(200, 800.0);
  ecg_rr[50] = 3000;  // removed before clipping
  const auto ecg = testutil::track_from_rr(Modality::ECG, 0, ecg_rr);
  const auto ppg = testutil::regular_track(Modality::PPG, 20000, 790, 200);
  const Case c("p", ecg, ppg, {});
  const auto pc = preprocess_case(c, {});
  EXPECT_EQ(pc.ecg_outliers, 1u);
  EXPECT_EQ(pc.ppg_outliers, 0u);
  EXPECT_EQ(pc.ecg.start(), 20000);
  EXPECT_EQ(pc.ecg.end(), ecg.end());
  EXPECT_NEAR(pc.mean_rr_diff_ms, 10.0, 1e-9);
  EXPECT_FALSE(pc.excluded);
}

TEST(PreprocessConfig, RejectsNonPositive) {
  PreprocessConfig cfg;
  cfg.k_exclusion_ms = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.sigma_factor = -1;
  EXPECT_THROW(cfg.validate(), Error);
}
