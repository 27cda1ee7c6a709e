#include <atomic>
#include <cstdlib>
#include <string>

#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"

namespace pfl::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return &scalar_table();
    case Backend::kAvx2:
      return cpu_has_avx2() ? avx2_table() : nullptr;
    case Backend::kNeon:
      return neon_table();
  }
  return nullptr;
}

Backend detect() {
  if (const char* env = std::getenv("PFL_KERNELS"); env && std::string(env) == "scalar") {
    return Backend::kScalar;
  }
  if (table_for(Backend::kAvx2)) return Backend::kAvx2;
  if (table_for(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

struct Active {
  std::atomic<Backend> backend{detect()};
  std::atomic<const KernelTable*> table{table_for(backend.load())};
};

Active& active() {
  static Active instance;
  return instance;
}

const KernelTable& current() { return *active().table.load(std::memory_order_relaxed); }

void check_same_size(std::size_t a, std::size_t b, const char* kernel) {
  if (a != b) {
    throw ConfigError(std::string("kernel ") + kernel + ": length mismatch " +
                      std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend backend) { return table_for(backend) != nullptr; }

Backend active_backend() { return active().backend.load(); }

void set_backend(Backend backend) {
  const KernelTable* table = table_for(backend);
  if (!table) {
    throw ConfigError("kernel backend '" + std::string(backend_name(backend)) +
                      "' is not available on this CPU");
  }
  active().table.store(table);
  active().backend.store(backend);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size(), "dot");
  return current().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size(), "axpy");
  current().axpy(alpha, x.data(), y.data(), x.size());
}

void add(std::span<const double> x, std::span<double> acc) {
  check_same_size(x.size(), acc.size(), "add");
  current().add(x.data(), acc.data(), x.size());
}

void scale(double alpha, std::span<double> x) { current().scale(alpha, x.data(), x.size()); }

void ring_add(std::span<const std::uint64_t> x, std::span<std::uint64_t> acc) {
  check_same_size(x.size(), acc.size(), "ring_add");
  current().ring_add(x.data(), acc.data(), x.size());
}

void ring_sub(std::span<const std::uint64_t> x, std::span<std::uint64_t> acc) {
  check_same_size(x.size(), acc.size(), "ring_sub");
  current().ring_sub(x.data(), acc.data(), x.size());
}

}  // namespace pfl::kernels
