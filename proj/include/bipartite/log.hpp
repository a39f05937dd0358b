#pragma once

#include <cstdarg>

namespace bipartite::logging {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Current level; initialized once from the BIPARTITE_LOG env var
// (error|warn|info|debug), default warn.
Level level();
void set_level(Level lvl);

void vlog(Level lvl, const char* fmt, va_list args);
void log(Level lvl, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

}  // namespace bipartite::logging

#define BIP_LOG_ERROR(...) ::bipartite::logging::log(::bipartite::logging::Level::error, __VA_ARGS__)
#define BIP_LOG_WARN(...) ::bipartite::logging::log(::bipartite::logging::Level::warn, __VA_ARGS__)
#define BIP_LOG_INFO(...) ::bipartite::logging::log(::bipartite::logging::Level::info, __VA_ARGS__)
#define BIP_LOG_DEBUG(...) ::bipartite::logging::log(::bipartite::logging::Level::debug, __VA_ARGS__)
