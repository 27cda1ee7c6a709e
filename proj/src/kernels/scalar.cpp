#include "pfl/kernels/kernels.hpp"

namespace pfl::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_scalar(const double* x, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void ring_add_scalar(const std::uint64_t* x, std::uint64_t* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void ring_sub_scalar(const std::uint64_t* x, std::uint64_t* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] -= x[i];
}

constexpr KernelTable kScalarTable{dot_scalar,   axpy_scalar,     add_scalar,
                                   scale_scalar, ring_add_scalar, ring_sub_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace pfl::kernels
