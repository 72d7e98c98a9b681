#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "pttseize/classifier.hpp"
#include "pttseize/features.hpp"
#include "pttseize/preprocess.hpp"
#include "pttseize/ptt.hpp"
#include "pttseize/synthgen.hpp"

namespace pttseize {

namespace fs = std::filesystem;

enum class Algorithm { Naive, Reactive };

struct SearchConfig {
  bool enabled = false;
  std::size_t n_draws = 20;
  SearchRanges ranges;
};

/// Everything a `run` needs. Defaults: k = 200 ms, 2 sigma, 20 % availability,
/// 8 min samples with two windows, o_s = 30 s, 1600 trees of depth 20 with
/// min split 10.
struct PipelineConfig {
  fs::path corpus;  // manifest.json
  fs::path output_dir = "out";
  Algorithm algorithm = Algorithm::Reactive;
  std::uint64_t seed = 1;
  unsigned threads = 1;  // 0: all hardware threads
  std::size_t n_folds = 5;
  bool export_traces = true;
  PreprocessConfig preprocess;
  ReactiveConfig reactive;
  FeatureConfig features;
  ForestHyperparams forest;
  SearchConfig search;

  void validate() const;
};

std::string_view algorithm_name(Algorithm a) noexcept;

/// Parses the versioned JSON config ({"format": "pttseize-config",
/// "version": 1, ...}). Unknown keys at any level raise Error(Parse).
/// Relative paths resolve against `base_dir`.
PipelineConfig parse_pipeline_config(std::string_view text, const fs::path& base_dir = {});
PipelineConfig load_pipeline_config(const fs::path& path);
std::string pipeline_config_to_json(const PipelineConfig& cfg);

/// Corpus generation request ({"format": "pttseize-corpus", "version": 1}).
struct CorpusSpec {
  std::size_t n_cases = 20;
  double seizure_fraction = 0.5;
  std::uint64_t seed = 1;
  GeneratorSpec template_spec;
  CorpusVariation variation;
};

CorpusSpec parse_corpus_spec(std::string_view text);
CorpusSpec load_corpus_spec(const fs::path& path);

/// Writes every case (case.json, ecg.csv, ppg.csv, groundtruth.json) under
/// out_dir/<id>/ plus out_dir/manifest.json. Returns the manifest path.
fs::path write_corpus(const fs::path& out_dir, const std::vector<GeneratedCase>& corpus);

std::string ground_truth_to_json(const std::string& case_id, const GroundTruth& truth);

}  // namespace pttseize
