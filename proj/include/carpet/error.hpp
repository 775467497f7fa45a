#pragma once

#include <stdexcept>
#include <string>

namespace carpet {

enum class Errc {
  PoleHit,
  Unsupported,
  InvalidArgument,
  DomainError,
  DegenerateComponent,
  EmptySet,
  DegenerateSet,
  PointsNotInSet,
  IdenticalEndpoints,
  CurveTooSmall,
  ClippedCurve,
  CenterOnBoundary,
  EmptyBits,
  TooFewCurves,
  ParseError,
  Io,
};

const char* to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace carpet
