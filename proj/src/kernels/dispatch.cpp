#include <atomic>
#include <cstdlib>
#include <cstring>

#include "bipartite/kernels.hpp"
#include "bipartite/log.hpp"

namespace bipartite::kernels {

namespace {

const Ops* pick_auto() {
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_supports_avx2()) return &avx2_ops();
#endif
  return &scalar_ops();
}

const Ops* pick_initial() {
  const char* env = std::getenv("BIPARTITE_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(env, "avx2") == 0 && cpu_supports_avx2())
      return &avx2_ops();
#endif
    if (std::strcmp(env, "auto") != 0)
      BIP_LOG_WARN("BIPARTITE_KERNELS=%s not available, using auto", env);
  }
  return pick_auto();
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (ops == nullptr) {
    ops = pick_initial();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

bool set_active(std::string_view name) {
  if (name == "scalar") {
    g_active.store(&scalar_ops(), std::memory_order_release);
    return true;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2") {
    if (!cpu_supports_avx2()) return false;
    g_active.store(&avx2_ops(), std::memory_order_release);
    return true;
  }
#endif
  if (name == "auto") {
    g_active.store(pick_auto(), std::memory_order_release);
    return true;
  }
  return false;
}

}  // namespace bipartite::kernels
