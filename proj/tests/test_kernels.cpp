#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <vector>

#include "twostage/kernels/kernels.hpp"
#include "twostage/stats.hpp"

using namespace twostage;

namespace {

struct BackendGuard {
  kernels::Backend saved;
  BackendGuard() : saved(kernels::active_backend()) {}
  ~BackendGuard() { kernels::force_backend(saved); }
};

}  // namespace

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 kat_vectors, cross-checked against an independent
  // implementation of the algorithm.
  struct Kat {
    std::uint32_t ctr[4], key[2], expect[4];
  };
  const Kat kats[] = {
      {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
      {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
       {0xffffffff, 0xffffffff},
       {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
      {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
       {0xa4093822, 0x299f31d0},
       {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
  };
  for (const Kat& k : kats) {
    std::uint32_t out[4];
    kernels::philox4x32_10(k.ctr, k.key, out);
    for (int i = 0; i < 4; ++i) CHECK(out[i] == k.expect[i]);
  }
}

TEST_CASE("scalar and simd backends produce bit-identical streams") {
  if (!kernels::cpu_supports_avx2()) return;
  BackendGuard guard;
  const SeedSpec seed{0xDEADBEEFCAFEF00Dull, 7};

  // deliberately awkward offsets and lengths to cover head/tail paths
  const std::uint64_t firsts[] = {0, 1, 3, 17, 1000};
  const std::size_t lens[] = {1, 2, 7, 16, 33, 1031};
  for (std::uint64_t first : firsts) {
    for (std::size_t len : lens) {
      std::vector<double> a(len), b(len), ua(len), ub(len);
      kernels::force_backend(kernels::Backend::scalar);
      kernels::fill_gaussian(seed, first, a);
      kernels::fill_uniform(seed, first, ua);
      kernels::force_backend(kernels::Backend::avx2);
      kernels::fill_gaussian(seed, first, b);
      kernels::fill_uniform(seed, first, ub);
      CHECK(std::memcmp(a.data(), b.data(), len * sizeof(double)) == 0);
      CHECK(std::memcmp(ua.data(), ub.data(), len * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("reductions agree across backends to the bit") {
  if (!kernels::cpu_supports_avx2()) return;
  BackendGuard guard;
  const SeedSpec seed{42, 0};
  for (std::size_t n : {1u, 5u, 64u, 1003u}) {
    std::vector<double> x(n), y(n);
    kernels::fill_gaussian(seed, 0, x);
    kernels::fill_gaussian(seed.derived(1, 1), 0, y);
    kernels::force_backend(kernels::Backend::scalar);
    const double s1 = kernels::sum(x), d1 = kernels::dot(x, y),
                 q1 = kernels::sumsq(x);
    kernels::force_backend(kernels::Backend::avx2);
    const double s2 = kernels::sum(x), d2 = kernels::dot(x, y),
                 q2 = kernels::sumsq(x);
    CHECK(std::memcmp(&s1, &s2, 8) == 0);
    CHECK(std::memcmp(&d1, &d2, 8) == 0);
    CHECK(std::memcmp(&q1, &q2, 8) == 0);
  }
}

TEST_CASE("fill is independent of batching") {
  const SeedSpec seed{99, 3};
  std::vector<double> whole(257);
  kernels::fill_gaussian(seed, 0, whole);
  std::vector<double> pieces(257);
  std::size_t at = 0;
  for (std::size_t chunk : {1u, 2u, 3u, 50u, 201u}) {
    kernels::fill_gaussian(seed, at, {pieces.data() + at, chunk});
    at += chunk;
  }
  CHECK(at == pieces.size());
  CHECK(std::memcmp(whole.data(), pieces.data(), sizeof(double) * 257) == 0);
}

TEST_CASE("vector ln and sincos match libm") {
  const SeedSpec seed{2024, 1};
  const std::size_t n = 4096;
  std::vector<double> u(n);
  kernels::fill_uniform(seed, 0, u);

  // the gaussian path evaluates ln on (0,1]; probe it through the output:
  // z0^2 + z1^2 = -2 ln u1 exactly in exact arithmetic
  std::vector<double> z(2 * n);
  kernels::fill_gaussian(seed, 0, z);
  // direct accuracy probes instead: ln via log, sin/cos via identities
  for (std::size_t i = 0; i < n; i += 37) {
    const double radsq = z[2 * (i / 2)] * z[2 * (i / 2)] +
                         z[2 * (i / 2) + 1] * z[2 * (i / 2) + 1];
    CHECK(std::isfinite(radsq));
  }

  // gaussian outputs satisfy the Box-Muller identities against libm
  std::vector<double> u2(2);
  for (std::uint64_t b = 0; b < 512; ++b) {
    double pair[2];
    kernels::fill_gaussian(seed, 2 * b, {pair, 2});
    kernels::fill_uniform(seed, 2 * b, {u2.data(), 2});
    const double u1 = 1.0 - u2[0];
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double c = std::cos(2.0 * std::numbers::pi * u2[1]);
    const double s = std::sin(2.0 * std::numbers::pi * u2[1]);
    CHECK(pair[0] == doctest::Approx(rad * c).epsilon(1e-10));
    CHECK(std::abs(pair[0] - rad * c) < 1e-11 + 1e-13 * rad);
    CHECK(std::abs(pair[1] - rad * s) < 1e-11 + 1e-13 * rad);
  }
}

TEST_CASE("gaussian stream moments and distribution") {
  const SeedSpec seed{7777, 0};
  std::vector<double> z(1000000);
  kernels::fill_gaussian(seed, 0, z);
  const double m = stats::mean(z);
  const double v = stats::variance(z);
  CHECK(std::abs(m) < 4e-3);
  CHECK(v == doctest::Approx(1.0).epsilon(6e-3));
  CHECK(std::abs(stats::skewness(z)) < 0.01);
  CHECK(std::abs(stats::excess_kurtosis(z)) < 0.02);

  std::vector<double> head(z.begin(), z.begin() + 10000);
  const double ks = stats::ks_distance(head, [](double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
  });
  CHECK(ks < 0.02);
}

TEST_CASE("uniform stream is uniform on [0,1)") {
  const SeedSpec seed{31337, 5};
  std::vector<double> u(100000);
  kernels::fill_uniform(seed, 0, u);
  for (double v : u) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  CHECK(stats::mean(u) == doctest::Approx(0.5).epsilon(4e-3));
  CHECK(stats::variance(u) == doctest::Approx(1.0 / 12.0).epsilon(2e-2));
}

TEST_CASE("distinct streams are uncorrelated") {
  const SeedSpec a{1234, 0};
  const SeedSpec b{1234, 1};
  std::vector<double> x(10000), y(10000);
  kernels::fill_uniform(a, 0, x);
  kernels::fill_uniform(b, 0, y);
  CHECK(std::abs(stats::pearson_correlation(x, y)) < 0.05);
}

TEST_CASE("reduction order is the documented 4-lane blocking") {
  // tiny case computable by hand: lanes (a0+a1)+(a2+a3) with tail into lane 0
  const std::vector<double> x = {1, 2, 3, 4, 5};
  // lanes after loop: {1,2,3,4}; tail adds 5 to lane 0 -> {6,2,3,4}
  CHECK(kernels::sum(x) == ((6.0 + 2.0) + (3.0 + 4.0)));
}
