#pragma once

#include <string>
#include <string_view>
#include <vector>

// Thin facade over spdlog so the logging backend stays out of public headers.
namespace topex::log {

enum class Level { kDebug, kInfo, kWarn, kError, kOff };

void set_level(Level level);

/// Reads TOPEX_LOG_LEVEL (debug|info|warn|error|off). Unset leaves "warn".
void init_from_env();

void debug(std::string_view message);
void info(std::string_view message);
void warn(std::string_view message);
void error(std::string_view message);

/// Records every warning emitted while alive (test hook). Not reentrant.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  std::vector<std::string> messages() const;
  bool contains(std::string_view needle) const;
};

}  // namespace topex::log
