#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "pttseize/io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(PTTSEIZE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, GenerateRunPttEval) {
  testutil::TempDir tmp;
  pttseize::write_text_file(tmp / "corpus.json", R"({
    "format": "pttseize-corpus", "version": 1, "n_cases": 10, "seizure_fraction": 0.5, "seed": 4,
    "template": {"hrv_sigma_ms": 15, "noise_sigma_ms": 3},
    "variation": {"duration_s": [2400, 2400], "drift_rate_ms_per_s": [0.02, 0.04], "event_duration_s": [90, 120]}
  })");
  pttseize::write_text_file(tmp / "run.json", R"({
    "format": "pttseize-config", "version": 1, "corpus": "corpus/manifest.json", "output_dir": "out",
    "n_folds": 3, "forest": {"n_trees": 20}
  })");

  ASSERT_EQ(run("generate --spec " + (tmp / "corpus.json").string() + " --out " + (tmp / "corpus").string()), 0);
  ASSERT_TRUE(fs::exists(tmp / "corpus/manifest.json"));

  ASSERT_EQ(run("run --config " + (tmp / "run.json").string() + " --seed 3"), 0);
  ASSERT_TRUE(fs::exists(tmp / "out/report.json"));
  const auto report = nlohmann::json::parse(pttseize::read_text_file(tmp / "out/report.json"));
  EXPECT_EQ(report.at("config").at("seed"), 3);

  ASSERT_EQ(run("ptt --case " + (tmp / "corpus/case_000/case.json").string() + " --out " + (tmp / "ptt").string()),
            0);
  for (const char* f : {"ecg_clean.csv", "ppg_clean.csv", "naive_ptt.csv", "reactive_ptt.csv", "offset.csv"}) {
    EXPECT_TRUE(fs::exists(tmp / "ptt" / f)) << f;
  }

  ASSERT_EQ(run("eval --dataset " + (tmp / "out/dataset.csv").string() + " --model " +
                (tmp / "out/model.json").string() + " --out " + (tmp / "eval").string()),
            0);
  EXPECT_TRUE(fs::exists(tmp / "eval/eval_report.json"));
  EXPECT_TRUE(fs::exists(tmp / "eval/roc.csv"));
}

TEST(Cli, FailuresExitNonZero) {
  testutil::TempDir tmp;
  EXPECT_NE(run(""), 0);
  EXPECT_NE(run("frobnicate"), 0);
  EXPECT_NE(run("run --config /nonexistent.json"), 0);
  pttseize::write_text_file(tmp / "bad.json", R"({"format": "pttseize-config", "version": 1, "bogus": 1})");
  EXPECT_EQ(run("run --config " + (tmp / "bad.json").string()), 1);
  pttseize::write_text_file(tmp / "nocorpus.json", R"({"format": "pttseize-config", "version": 1})");
  EXPECT_EQ(run("run --config " + (tmp / "nocorpus.json").string()), 1);
  EXPECT_NE(run("ptt --case /nonexistent/case.json --out " + tmp.path().string()), 0);
}
