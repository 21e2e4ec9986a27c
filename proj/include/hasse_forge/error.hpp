#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hasse_forge {

enum class ErrorKind {
  NonPrime,
  Reducible,
  DegreeMismatch,
  DivisionByZero,
  FieldMismatch,
  TooLarge,
  ShapeMismatch,
  UnsupportedBaseRing,
  LengthTooShort,
  WrongBaseField,
  SingularCurve,
  MissingCount,
  InsufficientCounts,
  NonIntegerCoefficients,
  SurplusCountMismatch,
  BettiMismatch,
  RootFindingDiverged,
  Singular,
  IllConditioned,
  Pole,
  BadParameter,
  BranchBoundary,
  IdentityViolated,
  SpecParse,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPrime: return "NonPrime";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnsupportedBaseRing: return "UnsupportedBaseRing";
    case ErrorKind::LengthTooShort: return "LengthTooShort";
    case ErrorKind::WrongBaseField: return "WrongBaseField";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::MissingCount: return "MissingCount";
    case ErrorKind::InsufficientCounts: return "InsufficientCounts";
    case ErrorKind::NonIntegerCoefficients: return "NonIntegerCoefficients";
    case ErrorKind::SurplusCountMismatch: return "SurplusCountMismatch";
    case ErrorKind::BettiMismatch: return "BettiMismatch";
    case ErrorKind::RootFindingDiverged: return "RootFindingDiverged";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::Pole: return "Pole";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::BranchBoundary: return "BranchBoundary";
    case ErrorKind::IdentityViolated: return "IdentityViolated";
    case ErrorKind::SpecParse: return "SpecParse";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hasse_forge
