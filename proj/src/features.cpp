#include "pttseize/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pttseize/error.hpp"
#include "pttseize/io.hpp"

namespace pttseize {

void FeatureConfig::validate() const {
  if (!(sample_len_s > 0.0)) throw Error(Errc::InvalidArgument, "features.sample_len_s must be > 0");
  if (n_windows != 2 && n_windows != 3) throw Error(Errc::InvalidArgument, "features.n_windows must be 2 or 3");
  if (!std::isfinite(o_s_s)) throw Error(Errc::InvalidArgument, "features.o_s_s must be finite");
}

std::size_t feature_count(int n_windows) {
  const auto n = static_cast<std::size_t>(n_windows);
  return 6 * n + n * (n - 1) / 2;
}

std::vector<std::string> feature_names(int n_windows) {
  static constexpr const char* kStats[] = {"mean", "min", "max", "var", "slope", "intercept"};
  std::vector<std::string> names;
  for (int w = 0; w < n_windows; ++w) {
    for (const char* s : kStats) names.push_back("w" + std::to_string(w) + "_" + s);
  }
  for (int i = 0; i < n_windows; ++i) {
    for (int j = i + 1; j < n_windows; ++j) {
      names.push_back("diff_m" + std::to_string(i) + "_m" + std::to_string(j));
    }
  }
  return names;
}

std::vector<double> window_features(std::span<const PTTEntry> segment, double start_ms, double len_ms,
                                    int n_windows) {
  if (n_windows < 1) throw Error(Errc::InvalidArgument, "n_windows must be positive");
  const double width = len_ms / n_windows;
  std::vector<double> out;
  out.reserve(feature_count(n_windows));
  std::vector<double> means;

  auto cursor = segment.begin();
  while (cursor != segment.end() && cursor->t < start_ms) ++cursor;
  for (int w = 0; w < n_windows; ++w) {
    const double lo = start_ms + w * width;
    const double hi = w + 1 == n_windows ? start_ms + len_ms : lo + width;
    auto first = cursor;
    while (cursor != segment.end() && cursor->t < hi) ++cursor;
    const std::span<const PTTEntry> win(first, cursor);
    if (win.size() < 2) {
      throw Error(Errc::SparseWindow, "window " + std::to_string(w) + " has " + std::to_string(win.size()) +
                                          " points");
    }
    const double n = static_cast<double>(win.size());
    double sum_y = 0.0, sum_x = 0.0;
    double lo_y = win.front().ptt, hi_y = win.front().ptt;
    for (const auto& e : win) {
      sum_y += e.ptt;
      sum_x += (e.t - lo) / 1000.0;
      lo_y = std::min(lo_y, e.ptt);
      hi_y = std::max(hi_y, e.ptt);
    }
    const double mean_y = sum_y / n;
    const double mean_x = sum_x / n;
    double syy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& e : win) {
      const double dx = (e.t - lo) / 1000.0 - mean_x;
      const double dy = e.ptt - mean_y;
      syy += dy * dy;
      sxx += dx * dx;
      sxy += dx * dy;
    }
    const double slope = sxy / sxx;
    out.insert(out.end(), {mean_y, lo_y, hi_y, syy / n, slope, mean_y - slope * mean_x});
    means.push_back(mean_y);
  }
  for (std::size_t i = 0; i < means.size(); ++i) {
    for (std::size_t j = i + 1; j < means.size(); ++j) out.push_back(means[i] - means[j]);
  }
  return out;
}

namespace {

std::optional<std::vector<double>> try_features(const PTTSeries& series, double lo, double len, int n_windows) {
  try {
    return window_features(series.slice(lo, lo + len), lo, len, n_windows);
  } catch (const Error& e) {
    if (e.code() == Errc::SparseWindow) return std::nullopt;
    throw;
  }
}

}  // namespace

std::optional<Sample> make_positive_sample(const PTTSeries& series, const SeizureAnnotation& seizure,
                                           const FeatureConfig& cfg, const std::string& case_id) {
  cfg.validate();
  if (series.empty()) return std::nullopt;
  const double len = cfg.sample_len_s * 1000.0;
  const double t_center = (seizure.start + seizure.end) / 2.0 + cfg.o_s_s * 1000.0;
  const double lo = t_center - len / 2.0;
  const double hi = t_center + len / 2.0;
  if (lo < series.entries().front().t || hi > series.entries().back().t) return std::nullopt;
  auto features = try_features(series, lo, len, cfg.n_windows);
  if (!features) return std::nullopt;
  return Sample{std::move(*features), 1, case_id, t_center, seizure.type};
}

std::vector<Sample> make_negative_samples(const PTTSeries& series, const FeatureConfig& cfg,
                                          const std::string& case_id) {
  cfg.validate();
  std::vector<Sample> out;
  if (series.empty()) return out;
  const double len = cfg.sample_len_s * 1000.0;
  const double first = series.entries().front().t;
  const double last = series.entries().back().t;
  for (std::size_t k = 0;; ++k) {
    const double lo = first + static_cast<double>(k) * len;
    if (lo + len > last) break;
    if (auto features = try_features(series, lo, len, cfg.n_windows)) {
      out.push_back(Sample{std::move(*features), 0, case_id, lo + len / 2.0, std::nullopt});
    }
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, std::span<const Sample> samples, int n_windows) {
  const auto names = feature_names(n_windows);
  std::ostringstream out;
  for (const auto& n : names) out << n << ',';
  out << "label,case_id,t_center_ms,seizure_type\n";
  for (const auto& s : samples) {
    if (s.features.size() != names.size()) throw Error(Errc::ShapeMismatch, "sample width differs from header");
    if (s.case_id.find_first_of(",\n\"") != std::string::npos) {
      throw Error(Errc::InvalidArgument, "case id not CSV-safe: " + s.case_id);
    }
    for (double v : s.features) out << format_number(v) << ',';
    out << s.label << ',' << s.case_id << ',' << format_number(s.t_center_ms) << ','
        << (s.seizure_type ? seizure_type_name(*s.seizure_type) : "") << '\n';
  }
  write_text_file(path, out.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

double to_double(const std::string& cell, std::size_t lineno) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
    throw Error(Errc::Parse, "dataset line " + std::to_string(lineno) + ": bad number '" + cell + "'");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::Parse, path.string() + ": empty dataset");
  auto header = split_csv_line(line);
  const auto label_col = std::find(header.begin(), header.end(), "label");
  if (header.size() < 4 || label_col == header.end() ||
      std::vector<std::string>(label_col, header.end()) !=
          std::vector<std::string>{"label", "case_id", "t_center_ms", "seizure_type"}) {
    throw Error(Errc::Parse, path.string() + ": unexpected dataset header");
  }
  Dataset ds;
  ds.feature_names.assign(header.begin(), label_col);
  const std::size_t nf = ds.feature_names.size();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::Parse, path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    }
    Sample s;
    for (std::size_t i = 0; i < nf; ++i) s.features.push_back(to_double(cells[i], lineno));
    s.label = cells[nf] == "1" ? 1 : 0;
    if (cells[nf] != "0" && cells[nf] != "1") {
      throw Error(Errc::Parse, path.string() + ":" + std::to_string(lineno) + ": label must be 0 or 1");
    }
    s.case_id = cells[nf + 1];
    s.t_center_ms = to_double(cells[nf + 2], lineno);
    if (!cells[nf + 3].empty()) s.seizure_type = parse_seizure_type(cells[nf + 3]).type;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace pttseize
