#include "topex/error.hpp"

#include <utility>

namespace topex {

namespace {

std::string located(const std::string& message, const std::string& source,
                    std::size_t line) {
  std::string where = source.empty() ? "<input>" : source;
  return where + ":" + std::to_string(line) + ": " + message;
}

}  // namespace

ValidationError::ValidationError(const std::string& message, std::string source,
                                 std::size_t line)
    : Error(ExitCode::kValidation, located(message, source, line)),
      source_(std::move(source)),
      detail_(message),
      line_(line) {}

}  // namespace topex
