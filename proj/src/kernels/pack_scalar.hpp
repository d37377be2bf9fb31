#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace twostage::kernels::detail {

// One-lane pack. The reference semantics for every SIMD variant: the AVX2
// pack performs the same IEEE operation per lane, so any kernel written
// against this interface is bit-identical across backends.
struct PackScalar {
  static constexpr int width = 1;
  using D = double;
  using U = std::uint64_t;

  static D dset(double v) { return v; }
  static U uset(std::uint64_t v) { return v; }

  static D add(D a, D b) { return a + b; }
  static D sub(D a, D b) { return a - b; }
  static D mul(D a, D b) { return a * b; }
  static D div(D a, D b) { return a / b; }
  static D vsqrt(D a) { return std::sqrt(a); }
  static D vfma(D a, D b, D c) { return std::fma(a, b, c); }

  /// Lane sign bit of `m` selects b over a (blendv semantics).
  static D blend(D a, D b, U m) { return (m >> 63) ? b : a; }

  static U uadd(U a, U b) { return a + b; }
  static U uand(U a, U b) { return a & b; }
  static U uor(U a, U b) { return a | b; }
  static U uxor(U a, U b) { return a ^ b; }
  template <int K>
  static U shl(U a) {
    return a << K;
  }
  template <int K>
  static U shr(U a) {
    return a >> K;
  }

  static U d2u(D a) { return std::bit_cast<std::uint64_t>(a); }
  static D u2d(U a) { return std::bit_cast<double>(a); }
};

}  // namespace twostage::kernels::detail
