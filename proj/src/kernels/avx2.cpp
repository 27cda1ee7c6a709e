#include "pfl/kernels/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)
#include <immintrin.h>
#define PFL_HAVE_AVX2 1
#endif

namespace pfl::kernels {

#if PFL_HAVE_AVX2
namespace {

// Four independent accumulators hide the FMA latency.
double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_add_pd(lo, hi);
  lo = _mm_add_sd(lo, _mm_unpackhi_pd(lo, lo));
  double sum = _mm_cvtsd_f64(lo);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

// Elementwise kernels use separate mul/add so they round exactly like the
// scalar loop.
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(a, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_avx2(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), a));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

void ring_add_avx2(const std::uint64_t* x, std::uint64_t* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    auto* dst = reinterpret_cast<__m256i*>(acc + i);
    const auto* src = reinterpret_cast<const __m256i*>(x + i);
    _mm256_storeu_si256(dst, _mm256_add_epi64(_mm256_loadu_si256(dst), _mm256_loadu_si256(src)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

void ring_sub_avx2(const std::uint64_t* x, std::uint64_t* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    auto* dst = reinterpret_cast<__m256i*>(acc + i);
    const auto* src = reinterpret_cast<const __m256i*>(x + i);
    _mm256_storeu_si256(dst, _mm256_sub_epi64(_mm256_loadu_si256(dst), _mm256_loadu_si256(src)));
  }
  for (; i < n; ++i) acc[i] -= x[i];
}

constexpr KernelTable kAvx2Table{dot_avx2,   axpy_avx2,     add_avx2,
                                 scale_avx2, ring_add_avx2, ring_sub_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2Table; }

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace pfl::kernels
