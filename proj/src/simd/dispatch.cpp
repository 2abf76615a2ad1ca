#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "attend/simd.hpp"

namespace attend::simd {
namespace {

bool cpu_has_avx2() {
#if defined(ATTEND_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* forced = std::getenv("ATTEND_SIMD")) {
    const std::string value(forced);
    if (value == "scalar") return Backend::Scalar;
    if (value == "avx2" && backend_supported(Backend::Avx2)) return Backend::Avx2;
    if (value == "neon" && backend_supported(Backend::Neon)) return Backend::Neon;
  }
  if (backend_supported(Backend::Avx2)) return Backend::Avx2;
  if (backend_supported(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels(detect_backend())};
  return table;
}

}  // namespace

bool backend_supported(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
    case Backend::Neon:
#if defined(ATTEND_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Backend backend) {
  if (!backend_supported(backend)) {
    throw std::invalid_argument("simd backend '" + std::string(backend_name(backend)) +
                                "' is not supported on this machine");
  }
  switch (backend) {
    case Backend::Avx2:
#if defined(ATTEND_HAVE_AVX2)
      return detail::kAvx2Kernels;
#else
      break;
#endif
    case Backend::Neon:
#if defined(ATTEND_HAVE_NEON)
      return detail::kNeonKernels;
#else
      break;
#endif
    case Backend::Scalar:
      break;
  }
  return detail::kScalarKernels;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

Backend active_backend() {
  const KernelTable* table = active_table().load(std::memory_order_relaxed);
  if (table->name == "avx2") return Backend::Avx2;
  if (table->name == "neon") return Backend::Neon;
  return Backend::Scalar;
}

void set_backend(Backend backend) {
  active_table().store(&kernels(backend), std::memory_order_relaxed);
}

const KernelTable& active() { return *active_table().load(std::memory_order_relaxed); }

}  // namespace attend::simd
