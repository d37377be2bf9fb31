#include <cmath>
#include <cstdint>

#include "twostage/common.hpp"
#include "twostage/rng.hpp"

namespace twostage {
namespace {

// Bijective 64-bit finalizer (splitmix64); distinct (domain, index) pairs
// map to distinct offsets, so derived streams never collide for a fixed seed.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

SeedSpec SeedSpec::derived(std::uint16_t domain, std::uint64_t index) const {
  const std::uint64_t packed =
      (std::uint64_t(domain) << 48) | (index & 0xFFFFFFFFFFFFull);
  return SeedSpec{master_seed, stream_id ^ mix64(packed)};
}

void PriorSpec::validate() const {
  if (lower.empty() || lower.size() != upper.size())
    throw ConfigError("prior: lower/upper must be nonempty and equally sized");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw ConfigError("prior: bounds must be finite");
    if (!(lower[i] < upper[i]))
      throw ConfigError("prior: lower[i] < upper[i] required");
  }
}

void ObservationSeries::validate() const {
  if (outputs.empty()) throw ConfigError("series: empty outputs");
  if (!inputs.empty() && inputs.size() != outputs.size())
    throw ConfigError("series: inputs length must match outputs");
  for (double v : outputs)
    if (!std::isfinite(v)) throw ConfigError("series: non-finite output");
  for (double v : inputs)
    if (!std::isfinite(v)) throw ConfigError("series: non-finite input");
}

std::vector<ParameterVector> sample_prior(const PriorSpec& prior,
                                          std::size_t count,
                                          const SeedSpec& seed) {
  prior.validate();
  if (count == 0) throw ConfigError("sample_prior: count must be >= 1");
  const std::size_t d = prior.dim();
  std::vector<double> u(count * d);
  kernels::fill_uniform(seed, 0, u);
  std::vector<ParameterVector> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    ParameterVector theta(d);
    for (std::size_t j = 0; j < d; ++j)
      theta[j] = prior.lower[j] + u[i * d + j] * (prior.upper[j] - prior.lower[j]);
    out[i] = std::move(theta);
  }
  return out;
}

}  // namespace twostage
