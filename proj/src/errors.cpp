#include "ntlab/errors.hpp"

namespace ntlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::QuadratureFailure: return "quadrature-failure";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::CacheInvalid: return "cache-invalid";
    case ErrorKind::ConfigParse: return "config-parse";
    case ErrorKind::AssertionFailed: return "assertion-failed";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace ntlab
