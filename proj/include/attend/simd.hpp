#pragma once

// Dense double-precision kernels used by the embedding trainers and the
// classifier. Each kernel has a scalar reference implementation plus
// vectorized variants (AVX2+FMA on x86-64, NEON on AArch64); the fastest
// supported variant is selected once at startup.
//
// Set ATTEND_SIMD=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace attend::simd {

enum class Backend { Scalar, Avx2, Neon };

/// Arguments for one bias-corrected Adam sweep over a flat parameter block.
struct AdamArgs {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias_correction1;  ///< 1 - beta1^t
  double bias_correction2;  ///< 1 - beta2^t
};

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  void (*adam_update)(double* params, const double* grads, double* m, double* v,
                      std::size_t n, const AdamArgs& args);
};

bool backend_supported(Backend backend);
const KernelTable& kernels(Backend backend);

Backend active_backend();
/// Throws std::invalid_argument if the backend is not supported on this CPU.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend);

const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double squared_norm(std::span<const double> x) {
  return active().dot(x.data(), x.data(), x.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(ATTEND_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(ATTEND_HAVE_NEON)
extern const KernelTable kNeonKernels;
#endif
}  // namespace detail

}  // namespace attend::simd
