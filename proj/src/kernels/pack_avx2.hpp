#pragma once

#include <immintrin.h>

#include <cstdint>

namespace twostage::kernels::detail {

// Four-lane AVX2 pack. Lane-for-lane the same IEEE ops as PackScalar.
struct PackAvx2 {
  static constexpr int width = 4;
  using D = __m256d;
  using U = __m256i;

  static D dset(double v) { return _mm256_set1_pd(v); }
  static U uset(std::uint64_t v) {
    return _mm256_set1_epi64x(static_cast<long long>(v));
  }

  static D add(D a, D b) { return _mm256_add_pd(a, b); }
  static D sub(D a, D b) { return _mm256_sub_pd(a, b); }
  static D mul(D a, D b) { return _mm256_mul_pd(a, b); }
  static D div(D a, D b) { return _mm256_div_pd(a, b); }
  static D vsqrt(D a) { return _mm256_sqrt_pd(a); }
  static D vfma(D a, D b, D c) { return _mm256_fmadd_pd(a, b, c); }

  static D blend(D a, D b, U m) {
    return _mm256_blendv_pd(a, b, _mm256_castsi256_pd(m));
  }

  static U uadd(U a, U b) { return _mm256_add_epi64(a, b); }
  static U uand(U a, U b) { return _mm256_and_si256(a, b); }
  static U uor(U a, U b) { return _mm256_or_si256(a, b); }
  static U uxor(U a, U b) { return _mm256_xor_si256(a, b); }
  template <int K>
  static U shl(U a) {
    return _mm256_slli_epi64(a, K);
  }
  template <int K>
  static U shr(U a) {
    return _mm256_srli_epi64(a, K);
  }

  static U d2u(D a) { return _mm256_castpd_si256(a); }
  static D u2d(U a) { return _mm256_castsi256_pd(a); }
};

}  // namespace twostage::kernels::detail
