#include "pttseize/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "pttseize/error.hpp"

namespace pttseize {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void default_warning_sink(const std::string& msg) { std::clog << "warning: " << msg << '\n'; }

namespace {

double parse_number(std::string_view text, std::string_view source, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(Errc::Parse, std::string(source) + ":" + std::to_string(line) + ": bad number '" +
                                 std::string(text) + "'");
  }
  return v;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  return out;
}

json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::Parse, path.string() + ": " + e.what());
  }
}

}  // namespace

SignalTrack parse_track_csv(std::istream& in, Modality modality, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::Parse, std::string(source) + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != "t_ms,rr_ms") {
    throw Error(Errc::Parse, std::string(source) + ": expected header 't_ms,rr_ms'");
  }
  std::vector<RREntry> entries;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error(Errc::Parse, std::string(source) + ":" + std::to_string(lineno) + ": expected two columns");
    }
    std::string_view sv(line);
    entries.push_back({parse_number(sv.substr(0, comma), source, lineno),
                       parse_number(sv.substr(comma + 1), source, lineno)});
  }
  return SignalTrack::from_entries(modality, std::move(entries));
}

void write_track_csv(std::ostream& out, const SignalTrack& track) {
  out << "t_ms,rr_ms\n";
  for (const auto& e : track.entries()) out << format_number(e.t) << ',' << format_number(e.rr) << '\n';
}

SignalTrack read_track_csv(const fs::path& path, Modality modality) {
  auto in = open_in(path);
  return parse_track_csv(in, modality, path.string());
}

void write_track_csv(const fs::path& path, const SignalTrack& track) {
  auto out = open_out(path);
  write_track_csv(out, track);
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

Case load_case(const fs::path& metadata_path, const WarningSink& warn) {
  const json meta = parse_json_file(metadata_path);
  const fs::path dir = metadata_path.parent_path();
  try {
    const auto id = meta.at("id").get<std::string>();
    auto ecg = read_track_csv(dir / meta.at("ecg_file").get<std::string>(), Modality::ECG);
    auto ppg = read_track_csv(dir / meta.at("ppg_file").get<std::string>(), Modality::PPG);
    std::vector<SeizureAnnotation> seizures;
    for (const auto& s : meta.at("seizures")) {
      const auto type_name = s.at("type").get<std::string>();
      const auto parsed = parse_seizure_type(type_name);
      if (!parsed.known && warn) warn("case " + id + ": unknown seizure type '" + type_name + "' mapped to other");
      seizures.push_back({s.at("start_ms").get<double>(), s.at("end_ms").get<double>(), parsed.type});
    }
    return Case(id, std::move(ecg), std::move(ppg), std::move(seizures),
                meta.value("epoch_iso8601", std::string{}));
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, metadata_path.string() + ": " + e.what());
  }
}

fs::path save_case(const fs::path& dir, const Case& c, const CaseFileNames& names) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_track_csv(dir / names.ecg, c.ecg());
  write_track_csv(dir / names.ppg, c.ppg());
  json seizures = json::array();
  for (const auto& s : c.seizures()) {
    seizures.push_back({{"start_ms", s.start}, {"end_ms", s.end}, {"type", seizure_type_name(s.type)}});
  }
  const json meta = {{"id", c.id()},
                     {"ecg_file", names.ecg},
                     {"ppg_file", names.ppg},
                     {"epoch_iso8601", c.epoch_iso8601()},
                     {"seizures", seizures}};
  const fs::path path = dir / names.metadata;
  write_text_file(path, meta.dump(2) + "\n");
  return path;
}

void write_manifest(const fs::path& path, const std::vector<std::string>& case_paths) {
  const json j = {{"version", 1}, {"cases", case_paths}};
  write_text_file(path, j.dump(2) + "\n");
}

std::vector<fs::path> read_manifest(const fs::path& path) {
  const json j = parse_json_file(path);
  std::vector<fs::path> out;
  try {
    for (const auto& p : j.at("cases")) out.push_back(path.parent_path() / p.get<std::string>());
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, path.string() + ": " + e.what());
  }
  return out;
}

std::vector<Case> load_corpus(const fs::path& manifest_path, const WarningSink& warn) {
  std::vector<Case> cases;
  for (const auto& p : read_manifest(manifest_path)) cases.push_back(load_case(p, warn));
  return cases;
}

void write_series_csv(const fs::path& path, const PTTSeries& series) {
  auto out = open_out(path);
  out << "t_ms,value_ms\n";
  for (const auto& e : series.entries()) out << format_number(e.t) << ',' << format_number(e.ptt) << '\n';
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  auto out = open_out(path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

}  // namespace pttseize
