#include "bipartite/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace bipartite::logging {

namespace {

Level parse_env() {
  const char* v = std::getenv("BIPARTITE_LOG");
  if (v == nullptr) return Level::warn;
  if (std::strcmp(v, "error") == 0) return Level::error;
  if (std::strcmp(v, "warn") == 0) return Level::warn;
  if (std::strcmp(v, "info") == 0) return Level::info;
  if (std::strcmp(v, "debug") == 0) return Level::debug;
  return Level::warn;
}

std::atomic<Level> g_level{parse_env()};
std::mutex g_mutex;

const char* tag(Level lvl) {
  switch (lvl) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
  }
  return "?";
}

}  // namespace

Level level() { return g_level.load(std::memory_order_relaxed); }
void set_level(Level lvl) { g_level.store(lvl, std::memory_order_relaxed); }

void vlog(Level lvl, const char* fmt, va_list args) {
  if (static_cast<int>(lvl) > static_cast<int>(level())) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[%s] ", tag(lvl));
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}

void log(Level lvl, const char* fmt, ...) {
  if (static_cast<int>(lvl) > static_cast<int>(level())) return;
  va_list args;
  va_start(args, fmt);
  vlog(lvl, fmt, args);
  va_end(args);
}

}  // namespace bipartite::logging
