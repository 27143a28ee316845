#pragma once

#include <stdexcept>
#include <string>

namespace skorokhod {

enum class ErrorKind {
  argument,
  domain_violation,
  unsupported_configuration,
  assumption_violation,
  numerical,
  size_limit,
  decomposition,
  w_membership,
  convergence,
  trace,
  epsilon_too_large,
  derivative_undefined,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` is stable and is what the
/// CLI reports in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace skorokhod
