#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

enum class ErrorKind {
  LoopEdge,
  NonpositiveIntensity,
  UnknownVertex,
  OracleGraphUnsupported,
  TolUnreachable,
  Unreachable,
  NoMargin,
  PreconditionViolated,
  TooLarge,
  InvalidDistribution,
  FrontierExhausted,
  InvalidSpec,
  IoFailure,
};

const char* to_string(ErrorKind kind);

// Numerical failures map to exit code 3 in the CLI, everything else to 2.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fpp
