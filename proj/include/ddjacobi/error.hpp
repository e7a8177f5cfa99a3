#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddjacobi {

enum class Errc {
  InvalidArgument,
  InvalidOptions,
  IndexOutOfRange,
  AsymmetricInput,
  NonFinite,
  ZeroDiagonal,
  NoConvergence,
  SingleEigenvalue,
  BothZero,
  DegenerateGapHat,
  BoundUndefined,
  InsufficientHistory,
  NonpositiveValues,
  VectorNotAccumulated,
  IsolatedVertex,
  CollapsedGap,
  StepLimit,
  TrackerStalled,
  ParseError,
  NotSymmetric,
  UnsupportedField,
  IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidOptions: return "InvalidOptions";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::AsymmetricInput: return "AsymmetricInput";
    case Errc::NonFinite: return "NonFinite";
    case Errc::ZeroDiagonal: return "ZeroDiagonal";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SingleEigenvalue: return "SingleEigenvalue";
    case Errc::BothZero: return "BothZero";
    case Errc::DegenerateGapHat: return "DegenerateGapHat";
    case Errc::BoundUndefined: return "BoundUndefined";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::NonpositiveValues: return "NonpositiveValues";
    case Errc::VectorNotAccumulated: return "VectorNotAccumulated";
    case Errc::IsolatedVertex: return "IsolatedVertex";
    case Errc::CollapsedGap: return "CollapsedGap";
    case Errc::StepLimit: return "StepLimit";
    case Errc::TrackerStalled: return "TrackerStalled";
    case Errc::ParseError: return "ParseError";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::UnsupportedField: return "UnsupportedField";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ddjacobi
