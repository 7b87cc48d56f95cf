#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heis {

enum class ErrorKind {
  InvalidArgument,
  NotInSubgroup,
  NoSignChange,
  MarginViolated,
  MonotonicityViolated,
  DependentNormals,
  VanishingGradient,
  GridMismatch,
  OrderingViolation,
  WindowExit,
  OriginNotZero,
  MeanBisectionFailure,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace heis
