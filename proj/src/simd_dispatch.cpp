#include <atomic>
#include <cstdlib>
#include <cstring>

#include "modeguide/simd.hpp"

namespace modeguide::simd {

#if MODEGUIDE_BUILD_AVX2
const KernelTable* avx2_kernels_impl();
const KernelTable* avx2_kernels() { return avx2_kernels_impl(); }
#else
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend detect() {
  const char* env = std::getenv("MODEGUIDE_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
  if (avx2_kernels() && cpu_has_avx2()) return Backend::Avx2;
  return Backend::Scalar;
}

std::atomic<int> g_backend{-1};

}  // namespace

Backend active_backend() {
  int b = g_backend.load(std::memory_order_acquire);
  if (b < 0) {
    b = static_cast<int>(detect());
    g_backend.store(b, std::memory_order_release);
  }
  return static_cast<Backend>(b);
}

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !(avx2_kernels() && cpu_has_avx2())) b = Backend::Scalar;
  g_backend.store(static_cast<int>(b), std::memory_order_release);
}

std::string backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

const KernelTable& kernels() {
  if (active_backend() == Backend::Avx2) return *avx2_kernels();
  return scalar_kernels();
}

}  // namespace modeguide::simd
