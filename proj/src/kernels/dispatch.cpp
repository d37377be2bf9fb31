#include "twostage/kernels/kernels.hpp"

#include <atomic>

#include "philox_core.hpp"
#include "table.hpp"

namespace twostage::kernels {
namespace {

std::atomic<const detail::KernelTable*> g_table{nullptr};

const detail::KernelTable* pick() {
#if defined(__x86_64__) || defined(__i386__)
  if (cpu_supports_avx2()) return &detail::kAvx2Table;
#endif
  return &detail::kScalarTable;
}

const detail::KernelTable* table() {
  const detail::KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = pick();
    g_table.store(t, std::memory_order_release);
  }
  return t;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
  return table() == &detail::kScalarTable ? Backend::scalar : Backend::avx2;
}

void force_backend(Backend b) {
#if defined(__x86_64__) || defined(__i386__)
  if (b == Backend::avx2) {
    if (!cpu_supports_avx2())
      throw ConfigError("AVX2 kernel backend not supported by this CPU");
    g_table.store(&detail::kAvx2Table, std::memory_order_release);
    return;
  }
#else
  if (b == Backend::avx2)
    throw ConfigError("AVX2 kernel backend not available on this architecture");
#endif
  g_table.store(&detail::kScalarTable, std::memory_order_release);
}

void fill_uniform(const SeedSpec& seed, std::uint64_t first,
                  std::span<double> out) {
  table()->fill_uniform(seed.master_seed, seed.stream_id, first, out.data(),
                        out.size());
}

void fill_gaussian(const SeedSpec& seed, std::uint64_t first,
                   std::span<double> out) {
  table()->fill_gaussian(seed.master_seed, seed.stream_id, first, out.data(),
                         out.size());
}

void philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2],
                   std::uint32_t out[4]) {
  detail::philox_block(counter, key, out);
}

double sum(std::span<const double> x) { return table()->sum(x.data(), x.size()); }

double sumsq(std::span<const double> x) {
  return table()->sumsq(x.data(), x.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("dot: length mismatch");
  return table()->dot(x.data(), y.data(), x.size());
}

}  // namespace twostage::kernels
