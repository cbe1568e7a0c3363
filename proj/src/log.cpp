#include "sgv/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace sgv::log {

namespace {

Level from_env() {
  const char* v = std::getenv("SGV_LOG");
  if (v == nullptr) return Level::Error;
  const std::string s(v);
  if (s == "debug") return Level::Debug;
  if (s == "info") return Level::Info;
  return Level::Error;
}

std::atomic<int>& current() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

const char* tag(Level level) {
  switch (level) {
    case Level::Error: return "error";
    case Level::Info: return "info";
    case Level::Debug: return "debug";
  }
  return "?";
}

}  // namespace

Level threshold() { return static_cast<Level>(current().load()); }

void set_threshold(Level level) { current().store(static_cast<int>(level)); }

void write(Level level, std::string_view message) {
  if (static_cast<int>(level) > current().load()) return;
  std::lock_guard<std::mutex> lock(sink_mutex());
  std::cerr << "[sgv " << tag(level) << "] " << message << '\n';
}

}  // namespace sgv::log
