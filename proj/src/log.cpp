#include "stmatch/log.hpp"

namespace stmatch::log {

namespace {

Level parse_level() {
  const char *env = std::getenv("STMATCH_LOG");
  if (env == nullptr)
    return Level::Info;
  std::string v(env);
  if (v == "error" || v == "0")
    return Level::Error;
  if (v == "warn" || v == "warning" || v == "1")
    return Level::Warn;
  if (v == "info" || v == "2")
    return Level::Info;
  if (v == "debug" || v == "3")
    return Level::Debug;
  return Level::Info;
}

const char *tag(Level level) {
  switch (level) {
  case Level::Error:
    return "error";
  case Level::Warn:
    return "warn";
  case Level::Info:
    return "info";
  case Level::Debug:
    return "debug";
  }
  return "?";
}

std::mutex g_mutex;

} // namespace

Level threshold() {
  static Level level = parse_level();
  return level;
}

void write(Level level, const std::string &msg) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[stmatch " << tag(level) << "] " << msg << "\n";
}

} // namespace stmatch::log
