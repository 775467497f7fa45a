#include "carpet/error.hpp"

namespace carpet {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::PoleHit: return "PoleHit";
    case Errc::Unsupported: return "Unsupported";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DomainError: return "DomainError";
    case Errc::DegenerateComponent: return "DegenerateComponent";
    case Errc::EmptySet: return "EmptySet";
    case Errc::DegenerateSet: return "DegenerateSet";
    case Errc::PointsNotInSet: return "PointsNotInSet";
    case Errc::IdenticalEndpoints: return "IdenticalEndpoints";
    case Errc::CurveTooSmall: return "CurveTooSmall";
    case Errc::ClippedCurve: return "ClippedCurve";
    case Errc::CenterOnBoundary: return "CenterOnBoundary";
    case Errc::EmptyBits: return "EmptyBits";
    case Errc::TooFewCurves: return "TooFewCurves";
    case Errc::ParseError: return "ParseError";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace carpet
