#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pttseize/signal_model.hpp"

namespace testutil {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "pttseize_";
    if (info) name += std::string(info->test_suite_name()) + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Regular beats every rr ms starting at t0.
inline pttseize::SignalTrack regular_track(pttseize::Modality m, double t0, double rr, std::size_t n) {
  std::vector<pttseize::RREntry> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({t0 + rr * static_cast<double>(i), rr});
  return pttseize::SignalTrack::from_entries(m, std::move(e));
}

inline pttseize::SignalTrack track_from_rr(pttseize::Modality m, double t0, const std::vector<double>& rr) {
  std::vector<pttseize::RREntry> e;
  double t = t0;
  for (double r : rr) {
    e.push_back({t, r});
    t += r;
  }
  return pttseize::SignalTrack::from_entries(m, std::move(e));
}

}  // namespace testutil
