#include "skorokhod/errors.hpp"

namespace skorokhod {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::domain_violation: return "domain_violation";
    case ErrorKind::unsupported_configuration: return "unsupported_configuration";
    case ErrorKind::assumption_violation: return "assumption_violation";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::size_limit: return "size_limit";
    case ErrorKind::decomposition: return "decomposition";
    case ErrorKind::w_membership: return "w_membership";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::trace: return "trace";
    case ErrorKind::epsilon_too_large: return "epsilon_too_large";
    case ErrorKind::derivative_undefined: return "derivative_undefined";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace skorokhod
