#include "twostage/asymptotics.hpp"

#include <cmath>
#include <vector>

#include "twostage/kernels/kernels.hpp"
#include "twostage/parallel.hpp"
#include "twostage/stats.hpp"

namespace twostage {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

}  // namespace

GaussianDensity GaussianDensity::make(double mu, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma2))
    throw ConfigError("gaussian density: need finite mu and sigma2 > 0");
  return GaussianDensity{mu, sigma2};
}

double GaussianDensity::pdf(double x) const {
  const double s = std::sqrt(sigma2);
  const double t = (x - mu) / s;
  return kInvSqrt2Pi / s * std::exp(-0.5 * t * t);
}

double GaussianDensity::cdf(double x) const {
  const double t = (x - mu) / std::sqrt(sigma2);
  return 0.5 * std::erfc(-t / kSqrt2);
}

double GaussianDensity::quantile(double gamma) const {
  return mu + std::sqrt(sigma2) * inverse_normal_cdf(gamma);
}

// Wichura's PPND16 rational approximation.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("inverse_normal_cdf: p must lie in (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    x = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    x = num / den;
  }
  return (q < 0.0) ? -x : x;
}

QuantileCovariance quantile_covariance(const GaussianDensity& density,
                                       const QuantileLevels& levels) {
  const std::vector<double> gammas = levels.gammas();
  QuantileCovariance out{levels,
                         Eigen::MatrixXd::Zero(levels.n, levels.n)};
  for (int k = 0; k < levels.n; ++k) {
    const double g = gammas[static_cast<std::size_t>(k)];
    const double f = density.pdf(density.quantile(g));
    if (!(f > 0.0))
      throw SupportError("quantile_covariance: zero density at quantile");
    out.sigma(k, k) = g * (1.0 - g) / (f * f);
  }
  return out;
}

Eigen::MatrixXd ts_asymptotic_variance(const LinearSecondStage& stage,
                                       const GaussianDensity& density,
                                       const QuantileLevels& levels) {
  if (stage.feature_map.input_dim() != levels.n)
    throw ConfigError("ts_asymptotic_variance: levels/feature-map mismatch");
  const std::vector<double> gammas = levels.gammas();
  std::vector<double> h0(static_cast<std::size_t>(levels.n));
  for (int k = 0; k < levels.n; ++k)
    h0[static_cast<std::size_t>(k)] =
        density.quantile(gammas[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXd grad = stage.feature_map.jacobian(h0);  // p x n
  const Eigen::MatrixXd sigma = quantile_covariance(density, levels).sigma;
  Eigen::MatrixXd s =
      stage.beta.transpose() * grad * sigma * grad.transpose() * stage.beta;
  return 0.5 * (s + s.transpose());
}

double crb_snr(double mu, double theta, int N, CrbMode mode,
               const SeedSpec& seed, int records) {
  if (!(theta > 0.0)) throw DomainError("crb_snr: theta must be > 0");
  if (N < 1) throw ConfigError("crb_snr: N must be >= 1");
  if (mode == CrbMode::paper) return 4.0 * theta * mu * mu / double(N);

  if (records < 2) throw ConfigError("crb_snr: need records >= 2");
  // Score of one record: (N - sum z_t^2) / (2 theta) with z standard normal.
  std::vector<double> scores(static_cast<std::size_t>(records));
  parallel_for(scores.size(), 0, [&](std::size_t r) {
    std::vector<double> z(static_cast<std::size_t>(N));
    kernels::fill_gaussian(seed.derived(stream_domain::score_mc, r), 0, z);
    scores[r] = (double(N) - kernels::sumsq(z)) / (2.0 * theta);
  });
  const double info = stats::variance(scores, 1);
  return 1.0 / info;
}

CltReport quantile_clt_check(const GaussianDensity& density, double gamma,
                             int N, int runs, const SeedSpec& seed) {
  if (runs < 100) throw ConfigError("quantile_clt_check: need runs >= 100");
  if (N < 2) throw ConfigError("quantile_clt_check: need N >= 2");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("quantile_clt_check: gamma must lie in (0, 1)");

  const double q = density.quantile(gamma);
  const double s = std::sqrt(density.sigma2);
  const double sqn = std::sqrt(double(N));
  std::vector<double> dev(static_cast<std::size_t>(runs));
  parallel_for(dev.size(), 0, [&](std::size_t r) {
    std::vector<double> y(static_cast<std::size_t>(N));
    kernels::fill_gaussian(seed.derived(stream_domain::clt_run, r), 0, y);
    for (double& v : y) v = density.mu + s * v;
    dev[r] = sqn * (empirical_quantile(y, gamma) - q);
  });

  CltReport rep;
  rep.empirical_var_scaled = stats::variance(dev, 1);
  const double f = density.pdf(q);
  rep.theoretical_var = gamma * (1.0 - gamma) / (f * f);
  rep.ratio = rep.empirical_var_scaled / rep.theoretical_var;
  return rep;
}

}  // namespace twostage
