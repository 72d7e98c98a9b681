#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pttseize {

enum class Errc {
  EmptyTrack,
  TooShort,
  NoOverlap,
  UnsortedTrack,
  InvalidArgument,
  SparseWindow,
  DegenerateLabels,
  ShapeMismatch,
  TooFewPerClass,
  EmptyRange,
  InvalidDuration,
  InvalidLatencyConfig,
  EmptyCorpusAfterExclusion,
  Io,
  Parse,
};

std::string_view errc_name(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above; what()
// reads "<CodeName>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pttseize
