#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "backend_math.hpp"
#include "pack_avx2.hpp"
#include "pack_scalar.hpp"
#include "philox_core.hpp"
#include "table.hpp"

namespace twostage::kernels::detail {
namespace {

using MS = VecMath<PackScalar>;
using MV = VecMath<PackAvx2>;

// 32x32 -> 64 multiply on all eight u32 lanes.
inline void mulhilo8(__m256i x, std::uint32_t m, __m256i& hi, __m256i& lo) {
  const __m256i mm = _mm256_set1_epi32(static_cast<int>(m));
  const __m256i pe = _mm256_mul_epu32(x, mm);                        // lanes 0,2,4,6
  const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), mm); // lanes 1,3,5,7
  lo = _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0b10101010);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), po, 0b10101010);
}

// Eight consecutive blocks, SoA. Outputs are the per-block 64-bit words in
// unpack order: the `a` vectors carry blocks {0,1,4,5}, `b` blocks {2,3,6,7}.
inline void philox8_blocks(std::uint64_t master, std::uint64_t stream,
                           std::uint64_t base, __m256i& lo_a, __m256i& hi_a,
                           __m256i& lo_b, __m256i& hi_b) {
  alignas(32) std::uint32_t c0[8], c1[8];
  for (int j = 0; j < 8; ++j) {
    const std::uint64_t blk = base + std::uint64_t(j);
    c0[j] = std::uint32_t(blk);
    c1[j] = std::uint32_t(blk >> 32);
  }
  __m256i x0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c0));
  __m256i x1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c1));
  __m256i x2 = _mm256_set1_epi32(static_cast<int>(std::uint32_t(stream)));
  __m256i x3 = _mm256_set1_epi32(static_cast<int>(std::uint32_t(stream >> 32)));
  std::uint32_t k0 = std::uint32_t(master);
  std::uint32_t k1 = std::uint32_t(master >> 32);
  for (int r = 0; r < 10; ++r) {
    __m256i hi0, lo0, hi1, lo1;
    mulhilo8(x0, kPhiloxM0, hi0, lo0);
    mulhilo8(x2, kPhiloxM1, hi1, lo1);
    const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
    const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
    x0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), vk0);
    x1 = lo1;
    x2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), vk1);
    x3 = lo0;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  lo_a = _mm256_unpacklo_epi32(x0, x1);
  lo_b = _mm256_unpackhi_epi32(x0, x1);
  hi_a = _mm256_unpacklo_epi32(x2, x3);
  hi_b = _mm256_unpackhi_epi32(x2, x3);
}

constexpr int kMapA[4] = {0, 1, 4, 5};
constexpr int kMapB[4] = {2, 3, 6, 7};

template <bool Gaussian>
void fill_avx2(std::uint64_t master, std::uint64_t stream, std::uint64_t first,
               double* out, std::size_t n) {
  if (n == 0) return;
  const std::uint64_t last = first + n - 1;
  const std::uint64_t bend = last / 2 + 1;
  std::uint64_t b = first / 2;

  // edge blocks go through the scalar pack (bit-identical by construction)
  const auto emit_edge = [&](std::uint64_t blk) {
    std::uint64_t lo, hi;
    philox_block_u64(master, stream, blk, lo, hi);
    double v0, v1;
    if constexpr (Gaussian) {
      MS::gaussian_pair(lo, hi, v0, v1);
    } else {
      v0 = MS::unit_halfopen(lo);
      v1 = MS::unit_halfopen(hi);
    }
    const std::uint64_t i0 = 2 * blk;
    if (i0 >= first && i0 <= last) out[i0 - first] = v0;
    if (i0 + 1 >= first && i0 + 1 <= last) out[i0 + 1 - first] = v1;
  };

  if (2 * b < first && b < bend) {
    emit_edge(b);
    ++b;
  }
  while (b + 8 <= bend && 2 * (b + 8) <= first + n) {
    __m256i lo_a, hi_a, lo_b, hi_b;
    philox8_blocks(master, stream, b, lo_a, hi_a, lo_b, hi_b);
    alignas(32) double va0[4], va1[4], vb0[4], vb1[4];
    if constexpr (Gaussian) {
      __m256d z0, z1;
      MV::gaussian_pair(lo_a, hi_a, z0, z1);
      _mm256_store_pd(va0, z0);
      _mm256_store_pd(va1, z1);
      MV::gaussian_pair(lo_b, hi_b, z0, z1);
      _mm256_store_pd(vb0, z0);
      _mm256_store_pd(vb1, z1);
    } else {
      _mm256_store_pd(va0, MV::unit_halfopen(lo_a));
      _mm256_store_pd(va1, MV::unit_halfopen(hi_a));
      _mm256_store_pd(vb0, MV::unit_halfopen(lo_b));
      _mm256_store_pd(vb1, MV::unit_halfopen(hi_b));
    }
    double* o = out + (2 * b - first);
    for (int j = 0; j < 4; ++j) {
      o[2 * kMapA[j]] = va0[j];
      o[2 * kMapA[j] + 1] = va1[j];
      o[2 * kMapB[j]] = vb0[j];
      o[2 * kMapB[j] + 1] = vb1[j];
    }
    b += 8;
  }
  for (; b < bend; ++b) emit_edge(b);
}

void fill_uniform_avx2(std::uint64_t master, std::uint64_t stream,
                       std::uint64_t first, double* out, std::size_t n) {
  fill_avx2<false>(master, stream, first, out, n);
}

void fill_gaussian_avx2(std::uint64_t master, std::uint64_t stream,
                        std::uint64_t first, double* out, std::size_t n) {
  fill_avx2<true>(master, stream, first, out, n);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += x[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t j = 0; i < n; ++i, ++j)
    lane[j] = PackScalar::vfma(x[i], y[i], lane[j]);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sumsq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

}  // namespace

const KernelTable kAvx2Table = {fill_uniform_avx2, fill_gaussian_avx2, sum_avx2,
                                sumsq_avx2, dot_avx2};

}  // namespace twostage::kernels::detail

#endif  // x86
