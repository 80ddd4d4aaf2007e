#pragma once

#include <stdexcept>
#include <string>

namespace wreath {

enum class ErrorKind {
  kDimensionOverflow,
  kDimensionMismatch,
  kIndexOutOfRange,
  kEnumerationOverflow,
  kNonConvergence,
  kNonRegular,
  kSingularCoefficient,
  kInvalidArgument,
  kParse,
  kUnsupported,
};

const char* to_string(ErrorKind kind);

/// Base of every exception thrown by the library. The kind lets front ends
/// map failures to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wreath
