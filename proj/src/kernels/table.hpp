#pragma once

#include <cstddef>
#include <cstdint>

namespace twostage::kernels::detail {

struct KernelTable {
  void (*fill_uniform)(std::uint64_t master, std::uint64_t stream,
                       std::uint64_t first, double* out, std::size_t n);
  void (*fill_gaussian)(std::uint64_t master, std::uint64_t stream,
                        std::uint64_t first, double* out, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sumsq)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(__i386__)
extern const KernelTable kAvx2Table;
#endif

}  // namespace twostage::kernels::detail
