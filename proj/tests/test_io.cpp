#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pttseize/error.hpp"
#include "pttseize/io.hpp"
#include "pttseize/synthgen.hpp"
#include "test_util.hpp"

using namespace pttseize;

TEST(FormatNumber, RoundTripsExactly) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e7, 1e7);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(800.0), "800");
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(TrackCsv, StreamRoundTrip) {
  const auto track = SignalTrack::from_entries(Modality::PPG, {{0.125, 812.5}, {812.625, 799.0}, {1611.625, 1e-3}});
  std::stringstream ss;
  write_track_csv(ss, track);
  const auto back = parse_track_csv(ss, Modality::PPG);
  EXPECT_EQ(back, track);
}

TEST(TrackCsv, AcceptsCrlfAndBom) {
  std::istringstream in("\xEF\xBB\xBFt_ms,rr_ms\r\n0,800\r\n800,810\r\n\r\n");
  const auto t = parse_track_csv(in, Modality::ECG);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.entries()[1].rr, 810);
}

TEST(TrackCsv, RejectsMalformedInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_track_csv(in, Modality::ECG);
  };
  EXPECT_THROW(parse(""), Error);
  EXPECT_THROW(parse("time,rr\n0,800\n"), Error);
  EXPECT_THROW(parse("t_ms,rr_ms\n0,800,1\n"), Error);
  EXPECT_THROW(parse("t_ms,rr_ms\n0,abc\n"), Error);
  EXPECT_THROW(parse("t_ms,rr_ms\n0,800 \n"), Error);
  try {
    parse("t_ms,rr_ms\n10,800\n5,800\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsortedTrack);
  }
}

TEST(CaseFiles, SaveLoadRoundTrip) {
  testutil::TempDir tmp;
  GeneratorSpec spec;
  spec.id = "rt";
  spec.duration_s = 600;
  spec.hrv_sigma_ms = 30;
  spec.noise_sigma_ms = 4;
  spec.events.push_back({200, 260, -40, 15, SeizureType::SPS, true});
  spec.seed = 77;
  const auto g = generate_case(spec);
  const auto meta = save_case(tmp / "rt", g.kase);
  const Case back = load_case(meta);
  EXPECT_EQ(back, g.kase);
}

TEST(CaseFiles, UnknownSeizureTypeWarnsAndMapsToOther) {
  testutil::TempDir tmp;
  const Case c("u", testutil::regular_track(Modality::ECG, 0, 800, 50),
               testutil::regular_track(Modality::PPG, 200, 800, 50), {{1000, 2000, SeizureType::CPS}});
  const auto meta = save_case(tmp.path(), c);
  auto text = read_text_file(meta);
  text.replace(text.find("\"CPS\""), 5, "\"hypermotor\"");
  write_text_file(meta, text);

  std::vector<std::string> warnings;
  const Case back = load_case(meta, [&](const std::string& w) { warnings.push_back(w); });
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("hypermotor"), std::string::npos);
  EXPECT_EQ(back.seizures()[0].type, SeizureType::other);
}

TEST(CaseFiles, MissingFieldIsParseError) {
  testutil::TempDir tmp;
  write_text_file(tmp / "case.json", R"({"id": "x", "ecg_file": "ecg.csv"})");
  try {
    load_case(tmp / "case.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == Errc::Parse || e.code() == Errc::Io);
  }
}

TEST(Manifest, ResolvesRelativeToManifest) {
  testutil::TempDir tmp;
  const Case a("a", testutil::regular_track(Modality::ECG, 0, 800, 20),
               testutil::regular_track(Modality::PPG, 300, 800, 20), {});
  save_case(tmp / "cases/a", a);
  write_manifest(tmp / "manifest.json", {"cases/a/case.json"});
  const auto cases = load_corpus(tmp / "manifest.json");
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_EQ(cases[0], a);
}

TEST(TextFiles, MissingFileIsIoError) {
  try {
    read_text_file("/nonexistent/pttseize/file.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Io);
  }
}
