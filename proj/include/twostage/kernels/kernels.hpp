#pragma once

#include <cstdint>
#include <span>

#include "twostage/common.hpp"

namespace twostage::kernels {

// Data-parallel inner loops: counter-based random generation and blocked
// reductions. Each kernel has a scalar reference implementation and an AVX2
// variant; the active backend is chosen once at startup from CPUID. The two
// backends are written against the same lane-level operation sequence and
// produce bit-identical results, which the test suite asserts.

enum class Backend { scalar, avx2 };

/// Backend selected for this process (CPUID-based unless forced).
Backend active_backend();

/// Override the backend (used by the equivalence tests). Throws ConfigError
/// if the requested backend is not available on this machine.
void force_backend(Backend b);

/// True if the CPU supports the AVX2+FMA variant.
bool cpu_supports_avx2();

// --- counter-based generation ----------------------------------------------
//
// Element `i` of a stream is a pure function of (master_seed, stream_id, i):
// block i/2 of a Philox-4x32-10 keyed by the master seed, with the 128-bit
// counter split as (block index, stream id). A fill of [first, first+n) is
// therefore independent of batch size and backend.

/// out[k] = uniform [0,1) element (first + k) of the stream.
void fill_uniform(const SeedSpec& seed, std::uint64_t first,
                  std::span<double> out);

/// out[k] = standard normal element (first + k) of the stream.
void fill_gaussian(const SeedSpec& seed, std::uint64_t first,
                   std::span<double> out);

/// Raw generator block (4x32 bits) — exposed for the known-answer tests.
void philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2],
                   std::uint32_t out[4]);

// --- blocked reductions ------------------------------------------------------
//
// Four-lane accumulation with a fixed combine order, identical in both
// backends, so sums are reproducible to the bit across machines.

double sum(std::span<const double> x);
double sumsq(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace twostage::kernels
