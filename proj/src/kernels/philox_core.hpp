#pragma once

#include <cstdint>

namespace twostage::kernels::detail {

// Philox-4x32-10 (counter-based). One block of four 32-bit words is keyed by
// the 64-bit master seed; the 128-bit counter carries (block index, stream id).

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_block(const std::uint32_t ctr[4], const std::uint32_t key[2],
                         std::uint32_t out[4]) {
  std::uint32_t x0 = ctr[0], x1 = ctr[1], x2 = ctr[2], x3 = ctr[3];
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * x0;
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * x2;
    const std::uint32_t y0 = std::uint32_t(p1 >> 32) ^ x1 ^ k0;
    const std::uint32_t y1 = std::uint32_t(p1);
    const std::uint32_t y2 = std::uint32_t(p0 >> 32) ^ x3 ^ k1;
    const std::uint32_t y3 = std::uint32_t(p0);
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  out[0] = x0;
  out[1] = x1;
  out[2] = x2;
  out[3] = x3;
}

/// Two 64-bit words of stream block `block`: (lo, hi).
inline void philox_block_u64(std::uint64_t master, std::uint64_t stream,
                             std::uint64_t block, std::uint64_t& lo,
                             std::uint64_t& hi) {
  const std::uint32_t ctr[4] = {std::uint32_t(block), std::uint32_t(block >> 32),
                                std::uint32_t(stream), std::uint32_t(stream >> 32)};
  const std::uint32_t key[2] = {std::uint32_t(master), std::uint32_t(master >> 32)};
  std::uint32_t x[4];
  philox_block(ctr, key, x);
  lo = std::uint64_t(x[0]) | (std::uint64_t(x[1]) << 32);
  hi = std::uint64_t(x[2]) | (std::uint64_t(x[3]) << 32);
}

}  // namespace twostage::kernels::detail
