#include "topex/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <memory>
#include <mutex>

namespace topex::log {

namespace {

std::shared_ptr<spdlog::logger>& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("topex");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return instance;
}

std::mutex capture_mutex;
std::vector<std::string>* capture_target = nullptr;

}  // namespace

void set_level(Level level) {
  switch (level) {
    case Level::kDebug: logger()->set_level(spdlog::level::debug); break;
    case Level::kInfo: logger()->set_level(spdlog::level::info); break;
    case Level::kWarn: logger()->set_level(spdlog::level::warn); break;
    case Level::kError: logger()->set_level(spdlog::level::err); break;
    case Level::kOff: logger()->set_level(spdlog::level::off); break;
  }
}

void init_from_env() {
  const char* raw = std::getenv("TOPEX_LOG_LEVEL");
  if (raw == nullptr) return;
  std::string_view v(raw);
  if (v == "debug") set_level(Level::kDebug);
  else if (v == "info") set_level(Level::kInfo);
  else if (v == "warn") set_level(Level::kWarn);
  else if (v == "error") set_level(Level::kError);
  else if (v == "off") set_level(Level::kOff);
}

void debug(std::string_view message) { logger()->debug(message); }
void info(std::string_view message) { logger()->info(message); }
void error(std::string_view message) { logger()->error(message); }

void warn(std::string_view message) {
  {
    std::lock_guard lock(capture_mutex);
    if (capture_target != nullptr) capture_target->emplace_back(message);
  }
  logger()->warn(message);
}

namespace {
std::vector<std::string> captured;
}

WarningCapture::WarningCapture() {
  std::lock_guard lock(capture_mutex);
  captured.clear();
  capture_target = &captured;
}

WarningCapture::~WarningCapture() {
  std::lock_guard lock(capture_mutex);
  capture_target = nullptr;
}

std::vector<std::string> WarningCapture::messages() const {
  std::lock_guard lock(capture_mutex);
  return captured;
}

bool WarningCapture::contains(std::string_view needle) const {
  for (const auto& m : messages()) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace topex::log
