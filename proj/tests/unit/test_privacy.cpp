#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "pfl/crypto/number_theory.hpp"
#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"
#include "pfl/federation/aggregate.hpp"
#include "pfl/privacy/dp.hpp"
#include "pfl/privacy/fixed_point.hpp"
#include "pfl/privacy/he.hpp"
#include "pfl/privacy/mechanism.hpp"
#include "pfl/privacy/paillier.hpp"
#include "pfl/privacy/secure_agg.hpp"
#include "pfl/privacy/smpc.hpp"

using namespace pfl;
using namespace pfl::privacy;

namespace {

constexpr double kQuantum = 1.0 / 65536.0;  // 2^-16

std::vector<ParamVector> random_updates(SeededRng& rng, std::size_t n, std::size_t dim, double range) {
  std::vector<ParamVector> out(n, ParamVector(dim));
  for (auto& u : out) {
    for (double& x : u) x = range * (2.0 * rng.uniform() - 1.0);
  }
  return out;
}

double max_abs_diff(const ParamVector& a, const ParamVector& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

std::vector<std::uint64_t> iota_roster(std::size_t n) {
  std::vector<std::uint64_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

const PaillierKeypair& test_keys() {
  static const PaillierKeypair keys = [] {
    SeededRng rng(77, 0);
    return paillier_keygen(256, rng);
  }();
  return keys;
}

}  // namespace

TEST_CASE("privacy config validation") {
  PrivacyConfig cfg;
  CHECK(cfg.validate(16).empty());
  cfg.key_bits = 100;
  cfg.epsilon = 0.0;
  cfg.num_parties = 1;
  const auto errors = cfg.validate(16);
  CHECK(errors.size() == 3);
  CHECK(std::any_of(errors.begin(), errors.end(), [](const std::string& e) { return e.find("256") != e.npos; }));

  PrivacyConfig ring;
  ring.mechanism = MechanismKind::kSa;
  ring.scale_bits = 40;
  CHECK(ring.validate(8).size() == 1);  // 8 * 2^40 * 2^20 = 2^63
  CHECK(ring.validate(7).empty());

  PrivacyConfig he;
  he.mechanism = MechanismKind::kHe;
  he.key_bits = 256;
  he.max_abs_value = std::ldexp(1.0, 200);
  CHECK(he.validate(4).empty());
  he.max_abs_value = std::ldexp(1.0, 240);
  CHECK(he.validate(4).size() == 1);

  CHECK_THROWS_AS(make_mechanism(cfg, 16, 1), ConfigError);
}

TEST_CASE("noise calibration formulas") {
  PrivacyConfig cfg;
  cfg.clip_norm = 2.0;
  cfg.epsilon = 0.5;
  CHECK(laplace_scale(cfg) == doctest::Approx(4.0));
  cfg.delta = 1e-5;
  CHECK(gaussian_sigma(cfg) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(1.25e5)) / 0.5));
  cfg.forced_noise_scale = 0.0;
  CHECK(laplace_scale(cfg) == 0.0);
  CHECK(gaussian_sigma(cfg) == 0.0);
}

TEST_CASE("fixed-point codec") {
  CHECK(fp_decode(fp_encode(0.0, 16), 16) == 0.0);
  CHECK(fp_decode(fp_encode(-1.5, 1), 1) == -1.5);
  CHECK(fp_decode(fp_encode(-1.5, 16), 16) == -1.5);
  CHECK(fp_encode(-1.0, 16) == 0 - (std::uint64_t{1} << 16));
  const BigUint n = BigUint::from_string("1000000007");
  CHECK(fp_encode(-1.5, 1, n) == n - BigUint(3));
  CHECK(fp_decode(fp_encode(-1.5, 4, n), 4, n) == -1.5);

  SeededRng rng(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double x = 20.0 * rng.uniform() - 10.0;
    CHECK(std::fabs(fp_decode(fp_encode(x, 16), 16) - x) <= kQuantum);
    CHECK(std::fabs(fp_decode(fp_encode(x, 16, n), 16, n) - x) <= kQuantum);
  }
  CHECK_THROWS_AS(fp_encode(std::ldexp(1.0, 47), 16), EncodeOverflowError);
  CHECK_THROWS_AS(fp_encode(1e4, 16, n), EncodeOverflowError);
  CHECK_THROWS_AS(fp_encode(std::nan(""), 16), EncodeOverflowError);

  const std::vector<double> xs{0.5, -3.0, 2.0};
  try {
    fp_encode_all(xs, 16, 2.5);
    FAIL("expected overflow");
  } catch (const EncodeOverflowError& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
  const auto enc = fp_encode_all(xs, 16, 3.0);
  std::vector<std::uint64_t> doubled(3);
  for (int i = 0; i < 3; ++i) doubled[i] = enc[i] * 2;
  const auto mean = fp_decode_mean(doubled, 16, 2);
  CHECK(mean == std::vector<double>{0.5, -3.0, 2.0});
}

TEST_CASE("envelope wire format") {
  SeededRng rng(2, 0);
  const ParamVector v{1.0, -2.5, 3.25};
  std::vector<Envelope> all = {
      Envelope(PlainPayload{v}),
      Envelope(NoisedPayload{v}),
      Envelope(CiphertextPayload{{BigUint(0), BigUint(255), BigUint::from_string("0x0102030405060708090a")}}),
      Envelope(SharePayload{{{1, 2, 3}, {~0ull, 0, 7}}}),
      Envelope(MaskedPayload{5, 9, {4, 5, 6}}),
  };
  for (const auto& e : all) {
    const auto bytes = e.serialize();
    CHECK(bytes.size() == e.byte_size());
    CHECK(Envelope::deserialize(bytes) == e);
    CHECK(e.dimension() == 3);
    for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
      CHECK_THROWS_AS(Envelope::deserialize(std::span(bytes).first(cut)), ParseError);
    }
    auto extra = bytes;
    extra.push_back(0);
    CHECK_THROWS_AS(Envelope::deserialize(extra), ParseError);
  }
  CHECK(all[0].byte_size() == 9 + 8 * 3);
  CHECK(all[4].byte_size() == 25 + 8 * 3);
  CHECK(all[3].byte_size() == 9 + 2 * (8 + 8 * 3));
  const std::vector<std::uint8_t> bad_tag{9};
  CHECK_THROWS_AS(Envelope::deserialize(bad_tag), ParseError);
  CHECK_FALSE(all[0] == all[1]);
}

TEST_CASE("envelope sizes order plain <= noised < masked/shares < ciphertexts") {
  SeededRng rng(3, 0);
  PrivacyConfig cfg;
  cfg.key_bits = 1024;
  const auto roster = iota_roster(2);
  const ParamVector u(50, 0.25);
  const auto plain = Envelope(PlainPayload{u}).byte_size();
  cfg.forced_noise_scale = 0.0;
  const auto noised = dp_protect(u, cfg, rng).byte_size();
  const auto masked = sa_protect(u, 0, roster, 1, 7, cfg).byte_size();
  const auto shares = smpc_protect(u, 2, rng, cfg).byte_size();
  SeededRng key_rng(4, 0);
  const auto keys = paillier_keygen(1024, key_rng);
  const auto cts = he_protect(u, keys.public_key, cfg, rng).byte_size();
  CHECK(plain <= noised);
  CHECK(noised < masked);
  CHECK(noised < shares);
  CHECK(masked < cts);
  CHECK(shares < cts);
  // 2 * key_bits per ciphertext, up to leading zero bytes.
  CHECK(cts > 50 * (256 - 4));
}

TEST_CASE("dp clipping") {
  const ParamVector l1_ten{4.0, -6.0};
  const auto clipped = clip_update(l1_ten, 1.0, NoiseKind::kLaplace);
  CHECK(update_norm(clipped, NoiseKind::kLaplace) == doctest::Approx(1.0));
  CHECK(clipped[0] == doctest::Approx(0.4));
  CHECK(clipped[1] == doctest::Approx(-0.6));
  const ParamVector small{0.1, 0.2};
  CHECK(clip_update(small, 1.0, NoiseKind::kGaussian) == small);

  SeededRng rng(5, 0);
  for (int i = 0; i < 10000; ++i) {
    ParamVector u(1 + rng.uniform_below(20));
    const double mag = std::exp(8.0 * rng.uniform() - 4.0);
    for (double& x : u) x = mag * rng.normal();
    const double s = 0.1 + rng.uniform();
    for (NoiseKind kind : {NoiseKind::kLaplace, NoiseKind::kGaussian}) {
      CHECK(update_norm(clip_update(u, s, kind), kind) <= s);
    }
  }
}

TEST_CASE("dp protect and aggregate") {
  SeededRng rng(6, 0);
  PrivacyConfig cfg;
  cfg.mechanism = MechanismKind::kDp;

  SUBCASE("zero noise returns the clipped update") {
    cfg.forced_noise_scale = 0.0;
    const ParamVector u{3.0, 1.0};
    const auto env = dp_protect(u, cfg, rng);
    CHECK(env.as<NoisedPayload>().values == clip_update(u, 1.0, NoiseKind::kLaplace));
  }
  SUBCASE("laplace moments at S = 1, epsilon = 1") {
    const auto env = dp_protect(ParamVector(100000), cfg, rng);
    double sum = 0, sq = 0;
    for (double x : env.as<NoisedPayload>().values) {
      sum += x;
      sq += x * x;
    }
    const double mean = sum / 1e5;
    CHECK(std::fabs(mean) < 0.02);
    CHECK((sq / 1e5 - mean * mean) == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("gaussian noise has the calibrated sigma") {
    cfg.noise = NoiseKind::kGaussian;
    const auto env = dp_protect(ParamVector(100000), cfg, rng);
    double sq = 0;
    for (double x : env.as<NoisedPayload>().values) sq += x * x;
    CHECK(std::sqrt(sq / 1e5) == doctest::Approx(gaussian_sigma(cfg)).epsilon(0.02));
  }
  SUBCASE("zero-noise aggregate equals fed_avg exactly") {
    cfg.forced_noise_scale = 0.0;
    cfg.clip_norm = 1e9;
    const auto updates = random_updates(rng, 5, 30, 1.0);
    std::vector<Envelope> envs;
    for (const auto& u : updates) envs.push_back(dp_protect(u, cfg, rng));
    CHECK(dp_aggregate(envs) == federation::fed_avg(updates));
    CHECK(dp_aggregate(std::span(envs).first(1)) == updates[0]);
  }
  SUBCASE("noisy mean stays within 6 b / sqrt(N)") {
    constexpr std::size_t kN = 16, kDim = 10;
    int within = 0;
    for (int seed = 0; seed < 500; ++seed) {
      SeededRng r(100 + seed, 0);
      auto updates = random_updates(r, kN, kDim, 0.05);  // L1 < S: clipping is a no-op
      std::vector<Envelope> envs;
      for (const auto& u : updates) envs.push_back(dp_protect(u, cfg, r));
      within += max_abs_diff(dp_aggregate(envs), federation::fed_avg(updates)) <= 6.0 * laplace_scale(cfg) / 4.0;
    }
    CHECK(within >= 495);
  }
  SUBCASE("ragged input") {
    std::vector<Envelope> envs{Envelope(NoisedPayload{ParamVector(2)}), Envelope(NoisedPayload{ParamVector(3)})};
    CHECK_THROWS_AS(dp_aggregate(envs), InputError);
  }
}

TEST_CASE("paillier") {
  const auto& keys = test_keys();
  const auto& pub = keys.public_key;
  SeededRng rng(7, 0);
  CHECK(pub.n.bit_length() == 256);
  CHECK(pub.n == keys.secret_key.p * keys.secret_key.q);
  CHECK(keys.secret_key.p != keys.secret_key.q);
  CHECK(keys.secret_key.p.bit_length() == 128);
  CHECK(pub.g == pub.n + BigUint(1));

  CHECK(paillier_decrypt(keys, pub.encrypt(0, rng)) == BigUint(0));
  CHECK(paillier_decrypt(keys, pub.add(pub.encrypt(2, rng), pub.encrypt(3, rng))) == BigUint(5));
  for (int i = 0; i < 100; ++i) {
    const BigUint m = random_below(pub.n, rng);
    const BigUint c = pub.encrypt(m, rng);
    CHECK(paillier_decrypt(keys, c) == m);
    CHECK(paillier_decrypt_crt(keys, c) == m);
  }
  const BigUint a = random_below(pub.n, rng);
  CHECK(paillier_decrypt(keys, pub.scalar_mul(pub.encrypt(a, rng), 7)) == (a * BigUint(7)) % pub.n);
  // Fresh randomness per encryption.
  CHECK_FALSE(pub.encrypt(5, rng) == pub.encrypt(5, rng));
  CHECK_THROWS_AS(pub.encrypt(pub.n, rng), InputError);
  CHECK_THROWS_AS(paillier_keygen(128, rng), InputError);
  CHECK_THROWS_AS(paillier_keygen(257, rng), InputError);
}

TEST_CASE("he pipeline") {
  const auto& keys = test_keys();
  SeededRng rng(8, 0);
  PrivacyConfig cfg;
  cfg.mechanism = MechanismKind::kHe;
  cfg.key_bits = 256;

  const auto updates = random_updates(rng, 8, 40, 1.0);
  std::vector<Envelope> envs;
  for (const auto& u : updates) envs.push_back(he_protect(u, keys.public_key, cfg, rng));
  const auto one = he_recover(he_aggregate(std::span(envs).first(1), keys.public_key), keys, 1, cfg);
  CHECK(max_abs_diff(one, updates[0]) <= kQuantum);
  const auto mean = he_recover(he_aggregate(envs, keys.public_key), keys, 8, cfg);
  CHECK(max_abs_diff(mean, federation::fed_avg(updates)) <= kQuantum);

  PrivacyConfig narrow = cfg;
  narrow.max_abs_value = 0.01;
  CHECK_THROWS_AS(he_recover(he_aggregate(envs, keys.public_key), keys, 8, narrow), EncodeOverflowError);
  CHECK_THROWS_AS(he_protect(updates[0], keys.public_key, narrow, rng), EncodeOverflowError);
  std::vector<Envelope> mixed{envs[0], Envelope(PlainPayload{updates[0]})};
  CHECK_THROWS_AS(he_aggregate(mixed, keys.public_key), ProtocolError);
}

TEST_CASE("secure aggregation") {
  SeededRng rng(9, 0);
  PrivacyConfig cfg;
  cfg.mechanism = MechanismKind::kSa;

  SUBCASE("two clients cancel exactly") {
    const auto roster = iota_roster(2);
    const auto updates = random_updates(rng, 2, 25, 1.0);
    std::vector<Envelope> envs;
    for (std::uint64_t i = 0; i < 2; ++i) envs.push_back(sa_protect(updates[i], i, roster, 3, 42, cfg));
    const auto sum = sa_masked_sum(envs, roster, 3);
    for (std::size_t c = 0; c < 25; ++c) {
      CHECK(sum[c] == fp_encode(updates[0][c], 16) + fp_encode(updates[1][c], 16));
    }
    CHECK(pairwise_mask(42, 3, 0, 1, 25) == pairwise_mask(42, 3, 1, 0, 25));
    CHECK_FALSE(pairwise_mask(42, 3, 0, 1, 25) == pairwise_mask(42, 4, 0, 1, 25));
  }
  SUBCASE("single client is unmasked") {
    const std::vector<std::uint64_t> roster{0};
    const ParamVector u{0.5, -0.25};
    const auto env = sa_protect(u, 0, roster, 1, 42, cfg);
    CHECK(env.as<MaskedPayload>().values == fp_encode_all(u.values(), 16, cfg.max_abs_value));
    CHECK(sa_aggregate(std::span(&env, 1), roster, 1, cfg) == u);
  }
  SUBCASE("eight clients against fed_avg") {
    const auto roster = iota_roster(8);
    const auto updates = random_updates(rng, 8, 100, 1.0);
    std::vector<Envelope> envs;
    for (std::uint64_t i = 0; i < 8; ++i) envs.push_back(sa_protect(updates[i], i, roster, 1, 5, cfg));
    CHECK(max_abs_diff(sa_aggregate(envs, roster, 1, cfg), federation::fed_avg(updates)) <= kQuantum);

    // A masked vector on its own reveals nothing near the update.
    const auto& masked = envs[0].as<MaskedPayload>().values;
    CHECK_FALSE(masked == fp_encode_all(updates[0].values(), 16, cfg.max_abs_value));

    CHECK_THROWS_AS(sa_aggregate(std::span(envs).first(7), roster, 1, cfg), ProtocolError);
    auto dup = envs;
    dup[7] = envs[6];
    CHECK_THROWS_AS(sa_aggregate(dup, roster, 1, cfg), ProtocolError);
    CHECK_THROWS_AS(sa_aggregate(envs, roster, 2, cfg), ProtocolError);
  }
}

TEST_CASE("smpc") {
  SeededRng rng(10, 0);
  PrivacyConfig cfg;
  cfg.mechanism = MechanismKind::kSmpc;

  SUBCASE("two shares sum to the encoding") {
    const ParamVector u{1.25, -7.0, 0.0};
    const auto env = smpc_protect(u, 2, rng, cfg);
    const auto& shares = env.as<SharePayload>().shares;
    REQUIRE(shares.size() == 2);
    for (std::size_t i = 0; i < 3; ++i) CHECK(shares[0][i] + shares[1][i] == fp_encode(u[i], 16));
  }
  SUBCASE("eight clients, three parties, against fed_avg") {
    const auto updates = random_updates(rng, 8, 100, 1.0);
    std::vector<Envelope> envs;
    for (const auto& u : updates) envs.push_back(smpc_protect(u, 3, rng, cfg));
    const auto totals = smpc_party_fold(envs, 3);
    REQUIRE(totals.size() == 3);
    CHECK(max_abs_diff(smpc_recover(totals, 3, 8, cfg), federation::fed_avg(updates)) <= kQuantum);
    CHECK_THROWS_AS(smpc_party_fold(envs, 2), ProtocolError);
    CHECK_THROWS_AS(smpc_recover(std::span(totals).first(2), 3, 8, cfg), ProtocolError);
  }
}

TEST_CASE("every mechanism recovers the plaintext mean through the interface") {
  SeededRng rng(11, 0);
  const auto roster = iota_roster(4);
  const auto updates = random_updates(rng, 4, 60, 1.0);
  const auto expected = federation::fed_avg(updates);
  for (MechanismKind kind :
       {MechanismKind::kNone, MechanismKind::kDp, MechanismKind::kHe, MechanismKind::kSa, MechanismKind::kSmpc}) {
    CAPTURE(mechanism_name(kind));
    PrivacyConfig cfg;
    cfg.mechanism = kind;
    cfg.key_bits = 256;
    cfg.forced_noise_scale = 0.0;
    cfg.clip_norm = 1e6;
    const auto mech = make_mechanism(cfg, 4, 99);
    CHECK(mech->kind() == kind);
    std::vector<Envelope> envs;
    for (std::uint64_t i = 0; i < 4; ++i) envs.push_back(mech->protect(updates[i], {i, 1, roster}));
    const auto mean = mech->aggregate(envs, 1, roster);
    if (kind == MechanismKind::kNone || kind == MechanismKind::kDp) {
      CHECK(mean == expected);
    } else {
      CHECK(max_abs_diff(mean, expected) <= kQuantum);
    }
  }
  CHECK(mechanism_name(*parse_mechanism("smpc")) == "smpc");
  CHECK_FALSE(parse_mechanism("rsa").has_value());
}
