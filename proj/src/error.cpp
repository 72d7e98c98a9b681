#include "pttseize/error.hpp"

namespace pttseize {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyTrack: return "EmptyTrack";
    case Errc::TooShort: return "TooShort";
    case Errc::NoOverlap: return "NoOverlap";
    case Errc::UnsortedTrack: return "UnsortedTrack";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SparseWindow: return "SparseWindow";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TooFewPerClass: return "TooFewPerClass";
    case Errc::EmptyRange: return "EmptyRange";
    case Errc::InvalidDuration: return "InvalidDuration";
    case Errc::InvalidLatencyConfig: return "InvalidLatencyConfig";
    case Errc::EmptyCorpusAfterExclusion: return "EmptyCorpusAfterExclusion";
    case Errc::Io: return "Io";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

}  // namespace pttseize
