#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace pfl {

// Folds a list of words into one stream identifier (SplitMix64 finalizer
// chained over the parts). Used to key independent streams by tuples such
// as (purpose, round, client).
std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts);

// Deterministic random stream keyed by (master_seed, stream_id).
//
// NOT cryptographically secure. Masks, shares and Paillier randomness are
// drawn from this stream so simulations replay exactly; a deployment would
// have to swap in an OS entropy source.
//
// All derived distributions are implemented here rather than taken from
// <random>, whose distribution algorithms are implementation-defined.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  SeededRng(std::uint64_t master_seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t next_u64() { return engine_(); }
  // Unbiased integer in [0, bound); bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);
  // 53-bit uniform double in [0, 1).
  double uniform();
  double normal();
  double laplace(double scale);
  // Gamma(shape, 1), shape > 0.
  double gamma(double shape);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline SeededRng seeded_rng(std::uint64_t master_seed, std::uint64_t stream) {
  return SeededRng(master_seed, stream);
}

}  // namespace pfl
