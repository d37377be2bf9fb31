#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "twostage/common.hpp"
#include "twostage/compression.hpp"

namespace twostage {

/// Monomials of total degree <= `degree` in graded-lex order, constant term
/// first; within a degree, exponent tuples are ordered lexicographically
/// descending (z1^2, z1 z2, z2^2, ...). The ordering fixes the row meaning
/// of every coefficient matrix.
class PolyFeatureMap {
public:
  static PolyFeatureMap make(int input_dim, int degree);
  PolyFeatureMap() = default;

  int input_dim() const { return input_dim_; }
  int degree() const { return degree_; }
  int output_dim() const { return static_cast<int>(exponents_.size()); }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }

  std::vector<double> features(std::span<const double> z) const;
  /// Analytic Jacobian dJ/dz, p x n.
  Eigen::MatrixXd jacobian(std::span<const double> z) const;

private:
  int input_dim_ = 0;
  int degree_ = 0;
  std::vector<std::vector<int>> exponents_;
};

/// beta (p x d) over a fixed polynomial feature map.
struct LinearSecondStage {
  Eigen::MatrixXd beta;
  PolyFeatureMap feature_map;
  bool rank_deficient = false;
  double condition = 0.0;  // |R_00 / R_kk| estimate from the pivoted QR
};

struct MlpConfig {
  int hidden = 64;
  int epochs = 200;
  int batch = 64;
  double step = 1e-3;
  SeedSpec seed;
};

/// Two affine layers with a ReLU between them; piecewise-affine forward map.
struct MlpSecondStage {
  Eigen::MatrixXd w1;  // hidden x n
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // d x hidden
  Eigen::VectorXd b2;
  double training_mse = 0.0;
};

enum class RidgePolicy {
  auto_fallback,  // singular + ridge 0: retry with 1e-10-scaled ridge, flag it
  strict,         // singular + ridge 0: throw RankDeficiencyError
};

/// Least squares over precomputed feature rows (each length map.output_dim()),
/// solved by Householder QR; the normal-equation identity is asserted by the
/// tests rather than re-derived through an explicit inverse.
LinearSecondStage fit_linear(const PolyFeatureMap& map,
                             const std::vector<std::vector<double>>& features,
                             const std::vector<ParameterVector>& targets,
                             double ridge,
                             RidgePolicy policy = RidgePolicy::auto_fallback);

/// Mini-batch Adam on mean squared error; inputs are standardized during
/// training and the affine normalization is folded back into the first
/// layer, so the returned network consumes raw features. Deterministic in
/// config.seed.
MlpSecondStage fit_mlp(const std::vector<std::vector<double>>& features,
                       const std::vector<ParameterVector>& targets,
                       const MlpConfig& config);

ParameterVector predict(const LinearSecondStage& stage,
                        std::span<const double> z);
ParameterVector predict(const MlpSecondStage& stage, std::span<const double> z);
ParameterVector predict(const LinearSecondStage& stage,
                        const CompressedFeatures& z);
ParameterVector predict(const MlpSecondStage& stage,
                        const CompressedFeatures& z);

// --- test support: the MLP loss/gradient pair used inside fit_mlp ----------

namespace mlp_detail {

struct Params {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

/// Mean squared error over (X rows, T rows).
double loss(const Params& p, const Eigen::MatrixXd& X, const Eigen::MatrixXd& T);
/// Analytic gradient of `loss`.
Params gradient(const Params& p, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& T);

}  // namespace mlp_detail

}  // namespace twostage
