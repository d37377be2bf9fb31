#pragma once

#include <array>

#include "twostage/common.hpp"

namespace twostage {

/// i.i.d. Gaussian record with known mean; the parameter is the
/// signal-to-noise ratio theta = mu^2 / sigma^2.
struct SnrModelSpec {
  double mu = 5.0;
  int N = 0;
};

/// Controlled two-state nonlinear system driven by a stochastic input.
struct NonlinearSystemSpec {
  int N = 0;
  double v11_var = 0.9;
  double v12_var = 0.1;
  double v2_var = 0.01;
  double input_var = 1.0;
  std::array<double, 2> x0 = {0.0, 0.0};
};

/// y_t = mu + e_t with e_t ~ N(0, mu^2/theta). Requires scalar theta > 0.
ObservationSeries simulate_snr(const SnrModelSpec& spec,
                               const ParameterVector& theta,
                               const SeedSpec& seed);

/// One record of the nonlinear system at scalar theta in [-0.9, 0.9].
/// Returns outputs and the freshly drawn inputs.
ObservationSeries simulate_nonlinear(const NonlinearSystemSpec& spec,
                                     const ParameterVector& theta,
                                     const SeedSpec& seed);

/// x2 state coefficient a(theta) = (1 - theta^2) sin(50 theta^2) - theta.
double nonlinear_a(double theta);
/// Input coefficient b(theta) = theta / (1 + theta^2).
double nonlinear_b(double theta);

}  // namespace twostage
