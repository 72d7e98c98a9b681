#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pttseize/error.hpp"
#include "pttseize/features.hpp"
#include "test_util.hpp"

using namespace pttseize;

namespace {

// Raw-sum normal equations in long double; deliberately a different route
// from the centred formulas in the library.
std::vector<double> oracle_features(const std::vector<PTTEntry>& pts, double start, double len, int n) {
  std::vector<double> out, means;
  const double width = len / n;
  for (int w = 0; w < n; ++w) {
    const double lo = start + w * width;
    const double hi = w + 1 == n ? start + len : lo + width;
    long double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, m = 0;
    double mn = INFINITY, mx = -INFINITY;
    for (const auto& p : pts) {
      if (p.t < lo || p.t >= hi) continue;
      const long double x = (p.t - lo) / 1000.0L;
      sx += x;
      sy += p.ptt;
      sxx += x * x;
      sxy += x * p.ptt;
      syy += static_cast<long double>(p.ptt) * p.ptt;
      mn = std::min(mn, p.ptt);
      mx = std::max(mx, p.ptt);
      m += 1;
    }
    const long double mean = sy / m;
    const long double var = syy / m - mean * mean;
    const long double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const long double icpt = (sy - slope * sx) / m;
    out.insert(out.end(), {static_cast<double>(mean), mn, mx, static_cast<double>(var), static_cast<double>(slope),
                           static_cast<double>(icpt)});
    means.push_back(static_cast<double>(mean));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(means[i] - means[j]);
  return out;
}

PTTSeries line_series(double t0, double t1, double step, double a, double b) {
  std::vector<PTTEntry> e;
  for (double t = t0; t < t1; t += step) e.push_back({t, a + b * (t - t0) / 1000.0});
  return PTTSeries(PTTKind::Reactive, std::move(e));
}

}  // namespace

TEST(FeatureLayout, CountsAndNames) {
  EXPECT_EQ(feature_count(2), 13u);
  EXPECT_EQ(feature_count(3), 21u);
  const auto names = feature_names(3);
  ASSERT_EQ(names.size(), 21u);
  EXPECT_EQ(names[0], "w0_mean");
  EXPECT_EQ(names[11], "w1_intercept");
  EXPECT_EQ(names[18], "diff_m0_m1");
  EXPECT_EQ(names[20], "diff_m1_m2");
}

TEST(WindowFeatures, LinearRampHasExactSlopeAndIntercept) {
  const auto s = line_series(0, 480000, 1000, 300, -0.5);
  const auto f = window_features(s.entries(), 0, 480000, 2);
  ASSERT_EQ(f.size(), 13u);
  EXPECT_NEAR(f[4], -0.5, 1e-9);
  EXPECT_NEAR(f[5], 300, 1e-9);
  EXPECT_NEAR(f[10], -0.5, 1e-9);
  EXPECT_NEAR(f[11], 300 - 120, 1e-9);  // second window restarts its clock
  EXPECT_NEAR(f[12], f[0] - f[6], 1e-12);
  EXPECT_NEAR(f[12], 120, 1e-9);
  EXPECT_EQ(f[1], 300 - 0.5 * 239);
  EXPECT_EQ(f[2], 300);
}

TEST(WindowFeatures, MatchesOracleOnRandomSegments) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> gap(200, 1600), val(150, 450), start(-1e6, 1e6);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = trial % 2 ? 3 : 2;
    const double s0 = start(rng);
    const double len = 480000;
    std::vector<PTTEntry> pts;
    for (double t = s0 - 5000; t < s0 + len + 5000; t += gap(rng)) pts.push_back({t, val(rng)});
    const PTTSeries series(PTTKind::Reactive, pts);
    const auto got = window_features(series.slice(s0, s0 + len), s0, len, n);
    const auto want = oracle_features(pts, s0, len, n);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-9 * std::max(1.0, std::abs(want[i]))) << "feature " << i;
    }
  }
}

TEST(WindowFeatures, SparseWindowThrows) {
  const PTTSeries s(PTTKind::Reactive, {{0, 1}, {1000, 2}, {300000, 3}});
  try {
    window_features(s.entries(), 0, 480000, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SparseWindow);
  }
}

TEST(PositiveSample, CentredPastSeizureMiddle) {
  const auto s = line_series(0, 3600000, 1000, 250, 0);
  FeatureConfig cfg;
  const SeizureAnnotation sz{1000000, 1100000, SeizureType::GTCS};
  const auto p = make_positive_sample(s, sz, cfg, "c1");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->label, 1);
  EXPECT_EQ(p->case_id, "c1");
  EXPECT_EQ(p->t_center_ms, 1080000);
  EXPECT_EQ(p->seizure_type, SeizureType::GTCS);
  const auto ref = window_features(s.entries(), 1080000 - 240000, 480000, 2);
  EXPECT_EQ(p->features, ref);
}

TEST(PositiveSample, DiscardedNearTheEdges) {
  const auto s = line_series(0, 600000, 1000, 250, 0);
  FeatureConfig cfg;
  EXPECT_FALSE(make_positive_sample(s, {10000, 20000, SeizureType::CPS}, cfg));
  EXPECT_FALSE(make_positive_sample(s, {560000, 590000, SeizureType::CPS}, cfg));
  EXPECT_TRUE(make_positive_sample(s, {250000, 260000, SeizureType::CPS}, cfg));
}

TEST(NegativeSamples, TileBackToBack) {
  const auto s = line_series(5000, 5000 + 3600000, 1000, 250, 0.01);
  FeatureConfig cfg;
  const auto neg = make_negative_samples(s, cfg, "n");
  // Last timestamp is 3604000; seven full 8-minute tiles fit after 5000.
  ASSERT_EQ(neg.size(), 7u);
  for (std::size_t k = 0; k < neg.size(); ++k) {
    EXPECT_EQ(neg[k].label, 0);
    EXPECT_EQ(neg[k].t_center_ms, 5000 + 480000.0 * k + 240000);
    EXPECT_FALSE(neg[k].seizure_type);
  }
}

TEST(NegativeSamples, SkipTilesWithHoles) {
  std::vector<PTTEntry> e;
  for (double t = 0; t < 1440000; t += 1000) {
    if (t >= 470000 && t < 950000) continue;  // empties both windows of tile 1
    e.push_back({t, 250});
  }
  const PTTSeries s(PTTKind::Reactive, e);
  const auto neg = make_negative_samples(s, {});
  ASSERT_EQ(neg.size(), 1u);
  EXPECT_EQ(neg[0].t_center_ms, 240000);
}

TEST(DatasetCsv, RoundTrip) {
  testutil::TempDir tmp;
  std::vector<Sample> samples;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d(0, 100);
  for (int i = 0; i < 20; ++i) {
    Sample s;
    for (int k = 0; k < 13; ++k) s.features.push_back(d(rng));
    s.label = i % 3 == 0;
    s.case_id = "case_" + std::to_string(i);
    s.t_center_ms = 1000.5 * i;
    if (s.label) s.seizure_type = SeizureType::SPS;
    samples.push_back(s);
  }
  write_dataset_csv(tmp / "d.csv", samples, 2);
  const auto ds = read_dataset_csv(tmp / "d.csv");
  EXPECT_EQ(ds.feature_names, feature_names(2));
  ASSERT_EQ(ds.samples.size(), samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(ds.samples[i].features, samples[i].features);
    EXPECT_EQ(ds.samples[i].label, samples[i].label);
    EXPECT_EQ(ds.samples[i].case_id, samples[i].case_id);
    EXPECT_EQ(ds.samples[i].t_center_ms, samples[i].t_center_ms);
    EXPECT_EQ(ds.samples[i].seizure_type, samples[i].seizure_type);
  }
}

TEST(FeatureConfig, OnlyTwoOrThreeWindows) {
  FeatureConfig cfg;
  cfg.n_windows = 4;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.n_windows = 3;
  EXPECT_NO_THROW(cfg.validate());
}
