#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace atrs {

enum class ErrorKind {
  InvalidPosition,
  ArityMismatch,
  InvalidRule,
  NotApplicative,
  AmbiguousApp,
  NotLeftHeadVariableFree,
  NameClash,
  UnknownSymbol,
  FuelExhausted,
  Overflow,
  SyntaxError,
  DimensionMismatch,
  MissingSymbol,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPosition: return "invalid-position";
    case ErrorKind::ArityMismatch: return "arity-mismatch";
    case ErrorKind::InvalidRule: return "invalid-rule";
    case ErrorKind::NotApplicative: return "not-applicative";
    case ErrorKind::AmbiguousApp: return "ambiguous-app";
    case ErrorKind::NotLeftHeadVariableFree: return "not-lhvf";
    case ErrorKind::NameClash: return "name-clash";
    case ErrorKind::UnknownSymbol: return "unknown-symbol";
    case ErrorKind::FuelExhausted: return "fuel-exhausted";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::SyntaxError: return "syntax-error";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::MissingSymbol: return "missing-symbol";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace atrs
