#pragma once

#include <Eigen/Dense>
#include <vector>

#include "twostage/common.hpp"

namespace twostage {

/// Augmented-state EKF for the nonlinear system: the parameter rides along
/// as a random-walk third state with process variance Q(2,2).
struct EkfConfig {
  Eigen::Matrix3d P0 = Eigen::Vector3d(0.1, 0.1, 0.5).asDiagonal();
  Eigen::Matrix3d Q = Eigen::Vector3d(0.9, 0.1, 1e-6).asDiagonal();
  double R = 0.01;
  Eigen::Vector3d x0 = Eigen::Vector3d::Zero();

  static EkfConfig large() { return EkfConfig{}; }
  static EkfConfig small() {
    EkfConfig c;
    c.P0 = Eigen::Vector3d(0.1, 0.1, 0.01).asDiagonal();
    return c;
  }
};

struct EkfTracePoint {
  Eigen::Vector3d state;
  Eigen::Matrix3d covariance;
};

struct EkfResult {
  double theta_hat = 0.0;  // final parameter state, clamped to [-0.9, 0.9]
  std::vector<EkfTracePoint> trace;  // post-update, only if requested
};

EkfResult ekf_estimate(const ObservationSeries& series, const EkfConfig& config,
                       bool keep_trace = false);

/// Transition Jacobian of the augmented system at (x, u); analytic.
Eigen::Matrix3d ekf_transition_jacobian(const Eigen::Vector3d& x, double u);

struct PemConfig {
  int n_init = 10;
  double theta_lo = -0.9;
  double theta_hi = 0.9;
  double tol = 1e-6;
  int max_iter = 200;
  SeedSpec seed;
};

struct PemInitRecord {
  double init = 0.0;
  double minimizer = 0.0;
  double objective = 0.0;
};

struct PemResult {
  double theta_hat = 0.0;
  double best_objective = 0.0;
  std::vector<PemInitRecord> per_init;
};

/// Output-error objective: sum of squared deviations of the record from the
/// noise-free x2 trajectory simulated with the recorded inputs.
double pem_objective(double theta, const ObservationSeries& series);

/// Multi-start bounded scalar minimization of pem_objective. Initializations
/// are a prefix-stable uniform sequence in [lo, hi], so the best objective is
/// nonincreasing in n_init for a fixed seed. Ties break on the lowest init
/// index.
PemResult pem_estimate(const ObservationSeries& series, const PemConfig& config);

}  // namespace twostage
