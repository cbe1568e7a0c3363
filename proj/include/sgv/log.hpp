#pragma once

#include <string_view>

namespace sgv::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

// Threshold from SGV_LOG (error | info | debug); defaults to error.
Level threshold();
void set_threshold(Level level);

void write(Level level, std::string_view message);
inline void error(std::string_view m) { write(Level::Error, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void debug(std::string_view m) { write(Level::Debug, m); }

}  // namespace sgv::log
