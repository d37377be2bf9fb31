#include <cstddef>
#include <cstdint>

#include "backend_math.hpp"
#include "pack_scalar.hpp"
#include "philox_core.hpp"
#include "table.hpp"

namespace twostage::kernels::detail {
namespace {

using M = VecMath<PackScalar>;

// Stream element i lives in block i/2; member i%2 selects the (lo, hi) word.
void fill_uniform_scalar(std::uint64_t master, std::uint64_t stream,
                         std::uint64_t first, double* out, std::size_t n) {
  if (n == 0) return;
  const std::uint64_t last = first + n - 1;
  for (std::uint64_t b = first / 2; b <= last / 2; ++b) {
    std::uint64_t lo, hi;
    philox_block_u64(master, stream, b, lo, hi);
    const std::uint64_t i0 = 2 * b;
    if (i0 >= first && i0 <= last) out[i0 - first] = M::unit_halfopen(lo);
    if (i0 + 1 >= first && i0 + 1 <= last) out[i0 + 1 - first] = M::unit_halfopen(hi);
  }
}

void fill_gaussian_scalar(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t first, double* out, std::size_t n) {
  if (n == 0) return;
  const std::uint64_t last = first + n - 1;
  for (std::uint64_t b = first / 2; b <= last / 2; ++b) {
    std::uint64_t lo, hi;
    philox_block_u64(master, stream, b, lo, hi);
    double z0, z1;
    M::gaussian_pair(lo, hi, z0, z1);
    const std::uint64_t i0 = 2 * b;
    if (i0 >= first && i0 <= last) out[i0 - first] = z0;
    if (i0 + 1 >= first && i0 + 1 <= last) out[i0 + 1 - first] = z1;
  }
}

// Four-lane blocked accumulation; the combine order is part of the contract.
double sum_scalar(const double* x, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 += x[i];
    l1 += x[i + 1];
    l2 += x[i + 2];
    l3 += x[i + 3];
  }
  double lane[4] = {l0, l1, l2, l3};
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += x[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 = PackScalar::vfma(x[i], y[i], l0);
    l1 = PackScalar::vfma(x[i + 1], y[i + 1], l1);
    l2 = PackScalar::vfma(x[i + 2], y[i + 2], l2);
    l3 = PackScalar::vfma(x[i + 3], y[i + 3], l3);
  }
  double lane[4] = {l0, l1, l2, l3};
  for (std::size_t j = 0; i < n; ++i, ++j)
    lane[j] = PackScalar::vfma(x[i], y[i], lane[j]);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sumsq_scalar(const double* x, std::size_t n) { return dot_scalar(x, x, n); }

}  // namespace

const KernelTable kScalarTable = {fill_uniform_scalar, fill_gaussian_scalar,
                                  sum_scalar, sumsq_scalar, dot_scalar};

}  // namespace twostage::kernels::detail
