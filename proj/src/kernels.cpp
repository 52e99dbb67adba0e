// Backend selection.  cpuid decides once at startup; TELEGRAPH_KERNELS or
// force_backend() can pin a specific variant (used by the equivalence tests
// and for reproducing results with the portable scalar path).

#include "telegraph/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "telegraph/errors.hpp"

namespace telegraph::kernels {

bool avx2_available() {
#if defined(TELEGRAPH_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64)) && \
    defined(__GNUC__)
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

#if !(defined(TELEGRAPH_BUILD_AVX2) && (defined(__x86_64__) || defined(_M_X64)))
const Backend& avx2_backend() {
  throw ConfigError("avx2 kernels were not compiled into this binary");
}
#endif

namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* resolve_auto() {
  if (avx2_available()) return &avx2_backend();
  return &scalar_backend();
}

const Backend* resolve_initial() {
  if (const char* env = std::getenv("TELEGRAPH_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return &avx2_backend();
    // unknown or unsupported value: fall through to auto
  }
  return resolve_auto();
}

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = resolve_initial();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

void force_backend(const std::string& name) {
  if (name == "scalar") {
    g_active.store(&scalar_backend(), std::memory_order_release);
  } else if (name == "avx2") {
    if (!avx2_available())
      throw ConfigError("avx2 kernels are not available on this host");
    g_active.store(&avx2_backend(), std::memory_order_release);
  } else if (name == "auto") {
    g_active.store(resolve_auto(), std::memory_order_release);
  } else {
    throw ConfigError("unknown kernel backend: " + name);
  }
}

}  // namespace telegraph::kernels
