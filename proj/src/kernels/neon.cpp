#include "pfl/kernels/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#define PFL_HAVE_NEON 1
#endif

namespace pfl::kernels {

#if PFL_HAVE_NEON
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
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(a, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_neon(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

void scale_neon(double alpha, double* x, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), a));
  for (; i < n; ++i) x[i] *= alpha;
}

void ring_add_neon(const std::uint64_t* x, std::uint64_t* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_u64(acc + i, vaddq_u64(vld1q_u64(acc + i), vld1q_u64(x + i)));
  for (; i < n; ++i) acc[i] += x[i];
}

void ring_sub_neon(const std::uint64_t* x, std::uint64_t* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_u64(acc + i, vsubq_u64(vld1q_u64(acc + i), vld1q_u64(x + i)));
  for (; i < n; ++i) acc[i] -= x[i];
}

constexpr KernelTable kNeonTable{dot_neon,   axpy_neon,     add_neon,
                                 scale_neon, ring_add_neon, ring_sub_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeonTable; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace pfl::kernels
