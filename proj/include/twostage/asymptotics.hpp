#pragma once

#include <Eigen/Dense>

#include "twostage/common.hpp"
#include "twostage/compression.hpp"
#include "twostage/regression.hpp"

namespace twostage {

/// Gaussian density with pdf/cdf/quantile. The quantile is computed to
/// near machine precision, so cdf(quantile(g)) == g to 1e-12.
struct GaussianDensity {
  double mu = 0.0;
  double sigma2 = 1.0;

  static GaussianDensity make(double mu, double sigma2);
  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double gamma) const;
};

/// Inverse standard normal cdf (rational approximation, |rel err| ~ 1e-15).
double inverse_normal_cdf(double p);

struct QuantileCovariance {
  QuantileLevels levels;
  Eigen::MatrixXd sigma;  // n x n, diagonal
};

/// Diagonal asymptotic covariance of the sample-quantile vector:
/// sigma_kk = gamma_k (1 - gamma_k) / f(F^-1(gamma_k))^2.
QuantileCovariance quantile_covariance(const GaussianDensity& density,
                                       const QuantileLevels& levels);

/// Delta-method sandwich for the quantile-compressed linear second stage,
/// evaluated at the population quantiles of `density`:
/// beta^T gradJ(h0) Sigma gradJ(h0)^T beta  (d x d, symmetric PSD).
Eigen::MatrixXd ts_asymptotic_variance(const LinearSecondStage& stage,
                                       const GaussianDensity& density,
                                       const QuantileLevels& levels);

enum class CrbMode {
  paper,        // 4 theta mu^2 / N (the published reference line)
  independent,  // 1 / I_hat with I_hat a Monte Carlo score-variance estimate
};

/// Cramer-Rao bound for the SNR experiment. The two modes intentionally
/// disagree; see crb_snr_analytic_independent for the closed form the
/// score-variance oracle estimates (2 theta^2 / N).
double crb_snr(double mu, double theta, int N, CrbMode mode,
               const SeedSpec& seed = {}, int records = 100000);

/// Closed form matched by the independent oracle.
inline double crb_snr_analytic_independent(double theta, int N) {
  return 2.0 * theta * theta / static_cast<double>(N);
}

struct CltReport {
  double empirical_var_scaled = 0.0;  // Var over runs of sqrt(N) (q_hat - q)
  double theoretical_var = 0.0;       // gamma (1-gamma) / f(q)^2
  double ratio = 0.0;
};

/// Monte Carlo check of the sample-quantile CLT at one level.
CltReport quantile_clt_check(const GaussianDensity& density, double gamma,
                             int N, int runs, const SeedSpec& seed);

}  // namespace twostage
