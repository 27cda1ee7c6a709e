#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"

using namespace pfl::kernels;

namespace {

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  if (avx2_table() && backend_supported(Backend::kAvx2)) out.push_back(avx2_table());
  if (neon_table() && backend_supported(Backend::kNeon)) out.push_back(neon_table());
  return out;
}

std::vector<double> random_doubles(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

std::vector<std::uint64_t> random_words(std::mt19937_64& gen, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = gen();
  return v;
}

}  // namespace

TEST_CASE("scalar kernels on hand values") {
  const auto& s = scalar_table();
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(s.dot(a.data(), b.data(), 3) == 32.0);
  s.axpy(2.0, a.data(), b.data(), 3);
  CHECK(b == std::vector<double>{6, 9, 12});
  s.add(a.data(), b.data(), 3);
  CHECK(b == std::vector<double>{7, 11, 15});
  s.scale(0.5, b.data(), 3);
  CHECK(b == std::vector<double>{3.5, 5.5, 7.5});

  std::vector<std::uint64_t> x{~0ull, 1}, acc{1, 0};
  s.ring_add(x.data(), acc.data(), 2);
  CHECK(acc == std::vector<std::uint64_t>{0, 1});
  s.ring_sub(x.data(), acc.data(), 2);
  CHECK(acc == std::vector<std::uint64_t>{1, 0});
}

TEST_CASE("vector backends match the scalar reference") {
  const auto tables = vector_tables();
  if (tables.empty()) {
    MESSAGE("no vector backend on this CPU; equivalence vacuous");
    return;
  }
  std::mt19937_64 gen(7);
  const auto& ref = scalar_table();
  for (const KernelTable* t : tables) {
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      auto a = random_doubles(gen, n);
      auto b = random_doubles(gen, n);
      const double alpha = std::uniform_real_distribution<double>(-3, 3)(gen);

      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::fabs(a[i] * b[i]);
      CHECK(std::fabs(t->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-14 * abs_sum + 1e-300);

      auto y1 = b, y2 = b;
      ref.axpy(alpha, a.data(), y1.data(), n);
      t->axpy(alpha, a.data(), y2.data(), n);
      CHECK(y1 == y2);

      y1 = b, y2 = b;
      ref.add(a.data(), y1.data(), n);
      t->add(a.data(), y2.data(), n);
      CHECK(y1 == y2);

      y1 = a, y2 = a;
      ref.scale(alpha, y1.data(), n);
      t->scale(alpha, y2.data(), n);
      CHECK(y1 == y2);

      auto u = random_words(gen, n);
      auto w1 = random_words(gen, n);
      auto w2 = w1;
      ref.ring_add(u.data(), w1.data(), n);
      t->ring_add(u.data(), w2.data(), n);
      CHECK(w1 == w2);
      ref.ring_sub(u.data(), w1.data(), n);
      t->ring_sub(u.data(), w2.data(), n);
      CHECK(w1 == w2);
    }
  }
}

TEST_CASE("dispatch") {
  CHECK(backend_supported(Backend::kScalar));
  const Backend original = active_backend();
  set_backend(Backend::kScalar);
  CHECK(active_backend() == Backend::kScalar);
  std::vector<double> a{1.5, -2.0}, b{2.0, 0.25};
  CHECK(dot(a, b) == 2.5);
  set_backend(original);
  CHECK(active_backend() == original);

  for (Backend b2 : {Backend::kAvx2, Backend::kNeon}) {
    if (!backend_supported(b2)) CHECK_THROWS_AS(set_backend(b2), pfl::ConfigError);
  }
}

TEST_CASE("span wrappers reject size mismatches") {
  std::vector<double> a(3), b(4);
  std::vector<std::uint64_t> u(2), w(3);
  CHECK_THROWS_AS(dot(a, b), pfl::ConfigError);
  CHECK_THROWS_AS(axpy(1.0, a, b), pfl::ConfigError);
  CHECK_THROWS_AS(add(a, b), pfl::ConfigError);
  CHECK_THROWS_AS(ring_add(u, w), pfl::ConfigError);
  CHECK_THROWS_AS(ring_sub(u, w), pfl::ConfigError);
}
