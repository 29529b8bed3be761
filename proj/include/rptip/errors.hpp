#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rptip {

enum class ErrorKind {
  DomainEscape,
  StepSizeUnderflow,
  NoCrossing,
  NoConvergence,
  NotPeriodic,
  WrongBasin,
  Ambiguous,
  AmbiguousAnchor,
  NotOnCycle,
  NoSeparatrix,
  NoOnset,
  PathOutOfRegion,
  InvalidArgument,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainEscape: return "DomainEscape";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotPeriodic: return "NotPeriodic";
    case ErrorKind::WrongBasin: return "WrongBasin";
    case ErrorKind::Ambiguous: return "Ambiguous";
    case ErrorKind::AmbiguousAnchor: return "AmbiguousAnchor";
    case ErrorKind::NotOnCycle: return "NotOnCycle";
    case ErrorKind::NoSeparatrix: return "NoSeparatrix";
    case ErrorKind::NoOnset: return "NoOnset";
    case ErrorKind::PathOutOfRegion: return "PathOutOfRegion";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every numerical failure in the library is reported through this type; the
/// kind is what callers (and the CLI exit path) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace rptip
