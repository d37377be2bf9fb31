#include "twostage/simulators.hpp"

#include <cmath>
#include <vector>

#include "twostage/kernels/kernels.hpp"

namespace twostage {

double nonlinear_a(double theta) {
  return (1.0 - theta * theta) * std::sin(50.0 * theta * theta) - theta;
}

double nonlinear_b(double theta) { return theta / (1.0 + theta * theta); }

ObservationSeries simulate_snr(const SnrModelSpec& spec,
                               const ParameterVector& theta,
                               const SeedSpec& seed) {
  if (spec.N < 1) throw ConfigError("snr model: N must be >= 1");
  if (!std::isfinite(spec.mu)) throw ConfigError("snr model: mu must be finite");
  if (theta.size() != 1) throw DomainError("snr model: theta must be scalar");
  if (!(theta[0] > 0.0))
    throw DomainError("snr model: theta must be > 0 (noise variance mu^2/theta)");
  const double sigma = std::sqrt(spec.mu * spec.mu / theta[0]);

  ObservationSeries s;
  s.outputs.resize(static_cast<std::size_t>(spec.N));
  kernels::fill_gaussian(seed, 0, s.outputs);
  for (double& v : s.outputs) v = spec.mu + sigma * v;
  s.theta_label = theta;
  return s;
}

ObservationSeries simulate_nonlinear(const NonlinearSystemSpec& spec,
                                     const ParameterVector& theta,
                                     const SeedSpec& seed) {
  if (spec.N < 1) throw ConfigError("nonlinear model: N must be >= 1");
  if (spec.v11_var <= 0 || spec.v12_var <= 0 || spec.v2_var <= 0 ||
      spec.input_var <= 0)
    throw ConfigError("nonlinear model: variances must be > 0");
  if (theta.size() != 1)
    throw DomainError("nonlinear model: theta must be scalar");
  const double th = theta[0];
  if (!(std::abs(th) <= 0.9))
    throw DomainError("nonlinear model: theta must lie in [-0.9, 0.9]");

  const auto n = static_cast<std::size_t>(spec.N);
  std::vector<double> u(n), v11(n), v12(n), v2(n);
  kernels::fill_gaussian(seed.derived(stream_domain::noise_u, 0), 0, u);
  kernels::fill_gaussian(seed.derived(stream_domain::noise_v11, 0), 0, v11);
  kernels::fill_gaussian(seed.derived(stream_domain::noise_v12, 0), 0, v12);
  kernels::fill_gaussian(seed.derived(stream_domain::noise_v2, 0), 0, v2);
  const double su = std::sqrt(spec.input_var);
  const double s11 = std::sqrt(spec.v11_var);
  const double s12 = std::sqrt(spec.v12_var);
  const double s2 = std::sqrt(spec.v2_var);

  const double a = nonlinear_a(th);
  const double b = nonlinear_b(th);

  ObservationSeries s;
  s.outputs.resize(n);
  s.inputs.resize(n);
  double x1 = spec.x0[0], x2 = spec.x0[1];
  for (std::size_t k = 0; k < n; ++k) {
    const double uk = su * u[k];
    s.inputs[k] = uk;
    s.outputs[k] = x2 + s2 * v2[k];
    const double x1n = 0.5 * x1 + uk + s11 * v11[k];
    const double x2n = a * x2 + b * uk + s12 * v12[k];
    x1 = x1n;
    x2 = x2n;
  }
  s.theta_label = theta;
  return s;
}

}  // namespace twostage
