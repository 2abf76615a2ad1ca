#include <arm_neon.h>

#include <cmath>

#include "attend/simd.hpp"

namespace attend::simd::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t diff = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, diff, diff);
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

void adam_update_neon(double* params, const double* grads, double* m, double* v,
                      std::size_t n, const AdamArgs& args) {
  const float64x2_t b1 = vdupq_n_f64(args.beta1);
  const float64x2_t b2 = vdupq_n_f64(args.beta2);
  const float64x2_t omb1 = vdupq_n_f64(1.0 - args.beta1);
  const float64x2_t omb2 = vdupq_n_f64(1.0 - args.beta2);
  const float64x2_t bc1 = vdupq_n_f64(args.bias_correction1);
  const float64x2_t bc2 = vdupq_n_f64(args.bias_correction2);
  const float64x2_t lr = vdupq_n_f64(args.lr);
  const float64x2_t eps = vdupq_n_f64(args.eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t g = vld1q_f64(grads + i);
    float64x2_t vm = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(omb1, g));
    float64x2_t vv =
        vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(omb2, vmulq_f64(g, g)));
    vst1q_f64(m + i, vm);
    vst1q_f64(v + i, vv);
    const float64x2_t m_hat = vdivq_f64(vm, bc1);
    const float64x2_t v_hat = vdivq_f64(vv, bc2);
    const float64x2_t step = vmulq_f64(lr, vdivq_f64(m_hat, vaddq_f64(vsqrtq_f64(v_hat), eps)));
    vst1q_f64(params + i, vsubq_f64(vld1q_f64(params + i), step));
  }
  const double one_minus_b1 = 1.0 - args.beta1;
  const double one_minus_b2 = 1.0 - args.beta2;
  for (; i < n; ++i) {
    const double g = grads[i];
    m[i] = args.beta1 * m[i] + one_minus_b1 * g;
    v[i] = args.beta2 * v[i] + one_minus_b2 * (g * g);
    const double m_hat = m[i] / args.bias_correction1;
    const double v_hat = v[i] / args.bias_correction2;
    params[i] -= args.lr * (m_hat / (std::sqrt(v_hat) + args.eps));
  }
}

}  // namespace

const KernelTable kNeonKernels{
    "neon", dot_neon, axpy_neon, squared_distance_neon, adam_update_neon,
};

}  // namespace attend::simd::detail
