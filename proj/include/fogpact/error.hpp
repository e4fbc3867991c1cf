#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fogpact {

enum class ErrorKind {
  SingularMatrix,
  NotPsd,
  DimensionMismatch,
  InvalidInstance,
  BadDimension,
  NoConvergence,
  InvalidPerturbation,
  InvalidProfile,
  InvalidSpec,
  Overflow,
  IoError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure is reported through this exception; kind() lets
/// callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fogpact
