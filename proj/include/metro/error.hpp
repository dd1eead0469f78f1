#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metro {

enum class ErrorKind {
  UnknownStation,
  SelfLoop,
  EmptyNetwork,
  OutOfRange,
  DimensionMismatch,
  SolverDivergence,
  CountOverflow,
  MalformedRow,
  DuplicateStation,
  MissingStation,
  DuplicateRecord,
  MissingZone,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Input-side errors map to CLI exit code 2; numerical failures to 3.
constexpr bool is_numerical(ErrorKind kind) noexcept {
  return kind == ErrorKind::SolverDivergence || kind == ErrorKind::CountOverflow;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace metro
