#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace topex {

/// Process exit codes used by the CLI.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kIo = 2,
  kInternal = 3,
};

/// Base class for every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Bad input data or arguments. Optionally carries the source location
/// (file and 1-based line) the problem was found at.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ExitCode::kValidation, message) {}
  ValidationError(const std::string& message, std::string source,
                  std::size_t line);

  const std::optional<std::size_t>& line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string source_;
  std::string detail_;
  std::optional<std::size_t> line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ExitCode::kIo, message) {}
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& message)
      : Error(ExitCode::kInternal, message) {}
};

/// Raised when two explanations live in different topic spaces or were
/// produced by different aggregation paths.
class ComparisonRefused : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace topex
