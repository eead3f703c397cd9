#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ntlab {

enum class ErrorKind {
  InvalidArgument,
  OutOfRange,
  ResourceLimit,
  Overflow,
  FitFailure,
  QuadratureFailure,
  Coverage,
  CacheInvalid,
  ConfigParse,
  AssertionFailed,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// runner can map it onto an exit status and an error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& message, double discrepancy)
      : Error(ErrorKind::QuadratureFailure, message), discrepancy_(discrepancy) {}

  double discrepancy() const noexcept { return discrepancy_; }

 private:
  double discrepancy_;
};

class FitError : public Error {
 public:
  FitError(const std::string& message, double condition_number)
      : Error(ErrorKind::FitFailure, message), condition_(condition_number) {}

  double condition_number() const noexcept { return condition_; }

 private:
  double condition_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, std::string_view message) {
  if (!condition) fail(kind, std::string(message));
}

}  // namespace ntlab
