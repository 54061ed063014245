#include "fpp/errors.hpp"

namespace fpp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LoopEdge: return "LoopEdge";
    case ErrorKind::NonpositiveIntensity: return "NonpositiveIntensity";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::OracleGraphUnsupported: return "OracleGraphUnsupported";
    case ErrorKind::TolUnreachable: return "TolUnreachable";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::NoMargin: return "NoMargin";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::FrontierExhausted: return "FrontierExhausted";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::TolUnreachable || kind == ErrorKind::FrontierExhausted ||
         kind == ErrorKind::NoMargin;
}

}  // namespace fpp
