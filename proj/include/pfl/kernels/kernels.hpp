#pragma once

// Dense inner-loop kernels shared by the model, aggregation and ring code.
//
// Every kernel has a scalar reference implementation; vectorized variants
// (AVX2 on x86-64, NEON on AArch64) are picked once at startup from the
// CPU's feature bits. Elementwise kernels are bit-identical across
// backends. `dot` reassociates the sum and is only equal to the scalar
// reference within rounding.
//
// Set PFL_KERNELS=scalar in the environment to pin the reference backend.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pfl::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend backend);
bool backend_supported(Backend backend);
Backend active_backend();
// Throws ConfigError when `backend` is not supported on this CPU.
void set_backend(Backend backend);

double dot(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// acc += x
void add(std::span<const double> x, std::span<double> acc);
// x *= alpha
void scale(double alpha, std::span<double> x);
// acc += x (mod 2^64)
void ring_add(std::span<const std::uint64_t> x, std::span<std::uint64_t> acc);
// acc -= x (mod 2^64)
void ring_sub(std::span<const std::uint64_t> x, std::span<std::uint64_t> acc);

// Per-backend entry points, exposed so the equivalence tests can call each
// variant directly. Sizes are assumed checked by the dispatching wrappers.
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*add)(const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*ring_add)(const std::uint64_t*, std::uint64_t*, std::size_t);
  void (*ring_sub)(const std::uint64_t*, std::uint64_t*, std::size_t);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace pfl::kernels
