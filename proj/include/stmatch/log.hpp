#ifndef STMATCH_LOG_HPP
#define STMATCH_LOG_HPP

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

namespace stmatch::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Verbosity comes from the STMATCH_LOG environment variable
// (error|warn|info|debug); default is info.
Level threshold();

void write(Level level, const std::string &msg);

template <typename... Args>
void emit(Level level, const std::string &component, Args &&...args) {
  if (level > threshold())
    return;
  std::ostringstream os;
  os << component << ": ";
  (os << ... << args);
  write(level, os.str());
}

template <typename... Args> void error(const std::string &component, Args &&...args) {
  emit(Level::Error, component, std::forward<Args>(args)...);
}
template <typename... Args> void warn(const std::string &component, Args &&...args) {
  emit(Level::Warn, component, std::forward<Args>(args)...);
}
template <typename... Args> void info(const std::string &component, Args &&...args) {
  emit(Level::Info, component, std::forward<Args>(args)...);
}
template <typename... Args> void debug(const std::string &component, Args &&...args) {
  emit(Level::Debug, component, std::forward<Args>(args)...);
}

} // namespace stmatch::log

#endif
