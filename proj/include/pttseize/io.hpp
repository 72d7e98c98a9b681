#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pttseize/signal_model.hpp"

namespace pttseize {

namespace fs = std::filesystem;

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

/// Receives non-fatal ingestion diagnostics (e.g. unknown seizure types).
using WarningSink = std::function<void(const std::string&)>;

void default_warning_sink(const std::string& msg);

// RR track files: CSV, header `t_ms,rr_ms`, one entry per row.
SignalTrack parse_track_csv(std::istream& in, Modality modality, std::string_view source = "<stream>");
void write_track_csv(std::ostream& out, const SignalTrack& track);
SignalTrack read_track_csv(const fs::path& path, Modality modality);
void write_track_csv(const fs::path& path, const SignalTrack& track);

// Case metadata: {id, ecg_file, ppg_file, epoch_iso8601, seizures:[{start_ms,end_ms,type}]}.
// Track file names are resolved relative to the metadata file's directory.
Case load_case(const fs::path& metadata_path, const WarningSink& warn = default_warning_sink);

struct CaseFileNames {
  std::string metadata = "case.json";
  std::string ecg = "ecg.csv";
  std::string ppg = "ppg.csv";
};

/// Writes metadata plus both track files into `dir` (created if missing).
/// Returns the metadata path.
fs::path save_case(const fs::path& dir, const Case& c, const CaseFileNames& names = {});

// Corpus manifest: {"version":1, "cases":["<relative metadata path>", ...]}.
void write_manifest(const fs::path& path, const std::vector<std::string>& case_paths);
std::vector<fs::path> read_manifest(const fs::path& path);
std::vector<Case> load_corpus(const fs::path& manifest_path, const WarningSink& warn = default_warning_sink);

// Plot-ready series: header `t_ms,value_ms`.
void write_series_csv(const fs::path& path, const PTTSeries& series);

std::string read_text_file(const fs::path& path);
void write_text_file(const fs::path& path, std::string_view text);

}  // namespace pttseize
