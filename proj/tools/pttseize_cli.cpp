// pttseize: command-line front end.
//
//   pttseize generate --spec corpus.json --out DIR
//   pttseize run      --config run.json [--corpus manifest.json] [--out DIR] [--seed N]
//   pttseize ptt      --case DIR/case.json --out DIR [--config run.json] [--algorithm naive|reactive]
//   pttseize eval     --dataset dataset.csv --model model.json --out DIR [--config run.json]

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pttseize/classifier.hpp"
#include "pttseize/config.hpp"
#include "pttseize/error.hpp"
#include "pttseize/io.hpp"
#include "pttseize/pipeline.hpp"
#include "pttseize/synthgen.hpp"

namespace fs = std::filesystem;
using namespace pttseize;

namespace {

int cmd_generate(const fs::path& spec_file, const fs::path& out_dir) {
  const CorpusSpec spec = load_corpus_spec(spec_file);
  const auto corpus =
      generate_corpus(spec.n_cases, spec.seizure_fraction, spec.template_spec, spec.seed, spec.variation);
  const fs::path manifest = write_corpus(out_dir, corpus);
  std::cerr << "wrote " << corpus.size() << " cases, manifest " << manifest.string() << '\n';
  return 0;
}

int cmd_run(const fs::path& config_file, const std::string& corpus, const std::string& out,
            std::optional<std::uint64_t> seed, std::optional<unsigned> threads) {
  PipelineConfig cfg = load_pipeline_config(config_file);
  if (!corpus.empty()) cfg.corpus = corpus;
  if (!out.empty()) cfg.output_dir = out;
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = *threads;
  if (cfg.corpus.empty()) throw Error(Errc::InvalidArgument, "no corpus given (config 'corpus' or --corpus)");

  const auto cases = load_corpus(cfg.corpus);
  const auto result = run_pipeline(cases, cfg, [](const std::string& line) { std::cerr << line << '\n'; });
  write_run_outputs(result, cfg);

  for (const auto& o : result.cases) {
    if (o.status == CaseStatus::Failed) std::cerr << "failed case " << o.id << ": " << o.reason << '\n';
  }
  const auto& r = result.report;
  std::cout << "algorithm=" << algorithm_name(cfg.algorithm) << " samples=" << r.n_positive << "+/"
            << r.n_negative << "- f1=" << format_number(r.mean.f1) << " +/- " << format_number(r.stddev.f1)
            << " auc=" << format_number(r.roc.auc) << " far_per_day=" << format_number(r.far_per_day)
            << " report=" << (cfg.output_dir / "report.json").string() << '\n';
  return 0;
}

int cmd_ptt(const fs::path& case_file, const std::string& config_file, const std::string& algorithm,
            const fs::path& out_dir) {
  PipelineConfig cfg;
  if (!config_file.empty()) cfg = load_pipeline_config(config_file);
  const Case c = load_case(case_file);
  const auto pre = preprocess_case(c, cfg.preprocess);
  if (pre.excluded) {
    std::cerr << "note: case " << c.id() << " would be excluded (mean RR difference "
              << format_number(pre.mean_rr_diff_ms) << " ms)\n";
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  write_track_csv(out_dir / "ecg_clean.csv", pre.ecg);
  write_track_csv(out_dir / "ppg_clean.csv", pre.ppg);
  if (algorithm.empty() || algorithm == "naive") write_series_csv(out_dir / "naive_ptt.csv", naive_ptt(pre.ecg, pre.ppg));
  if (algorithm.empty() || algorithm == "reactive") {
    const auto r = reactive_ptt(pre.ecg, pre.ppg, cfg.reactive);
    write_series_csv(out_dir / "reactive_ptt.csv", r.series);
    write_offset_csv(out_dir / "offset.csv", r.offsets);
  }
  std::cerr << "wrote PTT series for " << c.id() << " to " << out_dir.string() << '\n';
  return 0;
}

int cmd_eval(const fs::path& dataset_file, const fs::path& model_file, const std::string& config_file,
             const fs::path& out_dir) {
  PipelineConfig cfg;
  if (!config_file.empty()) cfg = load_pipeline_config(config_file);
  const Dataset ds = read_dataset_csv(dataset_file);
  const TrainedForest forest = load_forest(model_file);
  std::vector<double> proba;
  proba.reserve(ds.samples.size());
  for (const auto& s : ds.samples) proba.push_back(predict_proba(forest, s.features));
  const EvaluationReport report = evaluate_scores(ds.samples, proba, cfg.features);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  write_text_file(out_dir / "eval_report.json", evaluation_to_json(report));
  write_roc_csv(out_dir / "roc.csv", report.roc);
  std::cout << "f1=" << format_number(report.mean.f1) << " auc=" << format_number(report.roc.auc)
            << " far_per_day=" << format_number(report.far_per_day) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seizure detection from pulse transit time"};
  app.require_subcommand(1);

  std::string spec_file, gen_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic corpus");
  gen->add_option("--spec", spec_file, "Corpus spec (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "Output directory")->required();

  std::string run_config, run_corpus, run_out;
  std::optional<std::uint64_t> run_seed;
  std::optional<unsigned> run_threads;
  auto* run = app.add_subcommand("run", "Preprocess, compute PTT, train and evaluate");
  run->add_option("--config", run_config, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--corpus", run_corpus, "Override the corpus manifest");
  run->add_option("--out", run_out, "Override the output directory");
  run->add_option("--seed", run_seed, "Override the seed");
  run->add_option("--threads", run_threads, "Worker threads (0 = all)");

  std::string ptt_case, ptt_config, ptt_algorithm, ptt_out;
  auto* ptt = app.add_subcommand("ptt", "Export cleaned tracks, PTT series and offset trace for one case");
  ptt->add_option("--case", ptt_case, "Case metadata (case.json)")->required()->check(CLI::ExistingFile);
  ptt->add_option("--config", ptt_config, "Pipeline config for preprocessing/reactive settings")
      ->check(CLI::ExistingFile);
  ptt->add_option("--algorithm", ptt_algorithm, "naive or reactive (default: both)")
      ->check(CLI::IsMember({"naive", "reactive"}));
  ptt->add_option("--out", ptt_out, "Output directory")->required();

  std::string eval_dataset, eval_model, eval_config, eval_out;
  auto* ev = app.add_subcommand("eval", "Score a saved dataset with a saved model");
  ev->add_option("--dataset", eval_dataset, "dataset.csv")->required()->check(CLI::ExistingFile);
  ev->add_option("--model", eval_model, "model.json")->required()->check(CLI::ExistingFile);
  ev->add_option("--config", eval_config, "Pipeline config (feature settings)")->check(CLI::ExistingFile);
  ev->add_option("--out", eval_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(spec_file, gen_out);
    if (*run) return cmd_run(run_config, run_corpus, run_out, run_seed, run_threads);
    if (*ptt) return cmd_ptt(ptt_case, ptt_config, ptt_algorithm, ptt_out);
    if (*ev) return cmd_eval(eval_dataset, eval_model, eval_config, eval_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
