#pragma once

#include <stdexcept>
#include <string>

namespace ranksentinel {

// Values double as process exit codes for the CLI.
enum class ErrorKind : int {
  input = 2,
  degenerate = 3,
  optimization = 4,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

/// Malformed or inconsistent input: bad files, duplicate ids, invalid parameters.
class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

/// A statistic is undefined on the data (zero spread, empty change set, too few samples).
class DegenerateError : public Error {
public:
  explicit DegenerateError(const std::string& what) : Error(ErrorKind::degenerate, what) {}
};

class OptimizationError : public Error {
public:
  explicit OptimizationError(const std::string& what) : Error(ErrorKind::optimization, what) {}
};

}  // namespace ranksentinel
