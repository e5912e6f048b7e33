#pragma once

#include <stdexcept>
#include <string>

namespace lnncomm {

enum class ErrorKind {
  Config,     // invalid hyperparameter or option
  Data,       // malformed, missing or empty input data
  Dimension,  // shape mismatch between params and samples
  Numerical,  // corrupted model state, non-finite values
  Io,         // filesystem or parse failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// Process exit code used by the command-line tool for a given error kind.
int exit_code(ErrorKind kind) noexcept;

}  // namespace lnncomm
