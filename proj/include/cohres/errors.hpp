#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cohres {

enum class ErrorKind {
  ChannelClosed,
  NonPositive,
  UnknownChannel,
  IndexOutOfRange,
  DegenerateChannel,
  SpecMismatch,
  ZeroDenominator,
  InvalidArgument,
  InternalConsistency,
  Io,
  Malformed,
  Validation,
};

std::string_view to_string(ErrorKind kind);

// Every domain failure in the library surfaces as this exception; the CLI maps
// it to exit code 1.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace cohres
