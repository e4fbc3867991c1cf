#include "fogpact/error.hpp"

namespace fogpact {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidPerturbation: return "InvalidPerturbation";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fogpact
