#pragma once

#include <span>
#include <vector>

#include "twostage/common.hpp"
#include "twostage/kernels/kernels.hpp"

namespace twostage {

/// Sequential uniform [0,1) draws from one stream. Values depend only on
/// (seed, position), never on batching, so interleaving next()/fill() calls
/// is reproducible.
class UniformStream {
public:
  explicit UniformStream(SeedSpec seed) : seed_(seed) {}

  double next() {
    double v;
    kernels::fill_uniform(seed_, pos_++, {&v, 1});
    return v;
  }

  void fill(std::span<double> out) {
    kernels::fill_uniform(seed_, pos_, out);
    pos_ += out.size();
  }

private:
  SeedSpec seed_;
  std::uint64_t pos_ = 0;
};

/// Sequential unit-normal draws from one stream.
class GaussianStream {
public:
  explicit GaussianStream(SeedSpec seed) : seed_(seed) {}

  double next() {
    double v;
    kernels::fill_gaussian(seed_, pos_++, {&v, 1});
    return v;
  }

  void fill(std::span<double> out) {
    kernels::fill_gaussian(seed_, pos_, out);
    pos_ += out.size();
  }

private:
  SeedSpec seed_;
  std::uint64_t pos_ = 0;
};

/// `count` i.i.d. draws from a uniform-box prior. Deterministic in the seed.
std::vector<ParameterVector> sample_prior(const PriorSpec& prior,
                                          std::size_t count,
                                          const SeedSpec& seed);

}  // namespace twostage
