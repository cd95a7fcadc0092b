#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpower {

enum class Errc {
  NonHermitian,
  NotDensity,
  NotSimplex,
  DimMismatch,
  OutOfRange,
  OutsideValidity,
  Infeasible,
  UnsupportedDim,
  NotPOVM,
  CutoffTooSmall,
  NoConvergence,
  TooFewPoints,
  ConfigError,
};

std::string_view to_string(Errc code);

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::NotDensity: return "NotDensity";
    case Errc::NotSimplex: return "NotSimplex";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::OutsideValidity: return "OutsideValidity";
    case Errc::Infeasible: return "Infeasible";
    case Errc::UnsupportedDim: return "UnsupportedDim";
    case Errc::NotPOVM: return "NotPOVM";
    case Errc::CutoffTooSmall: return "CutoffTooSmall";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace qpower
