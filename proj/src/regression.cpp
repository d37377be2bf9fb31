#include "twostage/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twostage/rng.hpp"

namespace twostage {
namespace {

void enumerate_degree(int dims_left, int remaining, std::vector<int>& prefix,
                      std::vector<std::vector<int>>& out) {
  if (dims_left == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    prefix.push_back(e);
    enumerate_degree(dims_left - 1, remaining - e, prefix, out);
    prefix.pop_back();
  }
}

Eigen::MatrixXd stack_features(const std::vector<std::vector<double>>& rows,
                               int p) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd J(m, p);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != p)
      throw ConfigError("fit_linear: feature row length mismatch");
    for (int j = 0; j < p; ++j)
      J(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return J;
}

Eigen::MatrixXd stack_targets(const std::vector<ParameterVector>& targets) {
  if (targets.empty()) throw ConfigError("fit: no targets");
  const auto d = static_cast<Eigen::Index>(targets[0].size());
  Eigen::MatrixXd T(static_cast<Eigen::Index>(targets.size()), d);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (static_cast<Eigen::Index>(targets[i].size()) != d)
      throw ConfigError("fit: inconsistent target dimensions");
    for (Eigen::Index j = 0; j < d; ++j)
      T(static_cast<Eigen::Index>(i), j) = targets[i][static_cast<std::size_t>(j)];
  }
  return T;
}

void check_finite(std::span<const double> z) {
  for (double v : z)
    if (!std::isfinite(v)) throw DomainError("predict: non-finite feature entry");
}

}  // namespace

PolyFeatureMap PolyFeatureMap::make(int input_dim, int degree) {
  if (input_dim < 1) throw ConfigError("feature map: input_dim must be >= 1");
  if (degree < 0) throw ConfigError("feature map: degree must be >= 0");
  PolyFeatureMap map;
  map.input_dim_ = input_dim;
  map.degree_ = degree;
  std::vector<int> prefix;
  for (int d = 0; d <= degree; ++d)
    enumerate_degree(input_dim, d, prefix, map.exponents_);
  return map;
}

std::vector<double> PolyFeatureMap::features(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != input_dim_)
    throw ConfigError("feature map: input dimension mismatch");
  std::vector<double> out(exponents_.size());
  for (std::size_t r = 0; r < exponents_.size(); ++r) {
    double v = 1.0;
    for (int j = 0; j < input_dim_; ++j) {
      const int e = exponents_[r][static_cast<std::size_t>(j)];
      for (int q = 0; q < e; ++q) v *= z[static_cast<std::size_t>(j)];
    }
    out[r] = v;
  }
  return out;
}

Eigen::MatrixXd PolyFeatureMap::jacobian(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != input_dim_)
    throw ConfigError("feature map: input dimension mismatch");
  Eigen::MatrixXd G =
      Eigen::MatrixXd::Zero(output_dim(), input_dim_);
  for (std::size_t r = 0; r < exponents_.size(); ++r) {
    for (int j = 0; j < input_dim_; ++j) {
      const int ej = exponents_[r][static_cast<std::size_t>(j)];
      if (ej == 0) continue;
      double v = static_cast<double>(ej);
      for (int q = 0; q < input_dim_; ++q) {
        const int e = exponents_[r][static_cast<std::size_t>(q)] - (q == j ? 1 : 0);
        for (int w = 0; w < e; ++w) v *= z[static_cast<std::size_t>(q)];
      }
      G(static_cast<Eigen::Index>(r), j) = v;
    }
  }
  return G;
}

LinearSecondStage fit_linear(const PolyFeatureMap& map,
                             const std::vector<std::vector<double>>& features,
                             const std::vector<ParameterVector>& targets,
                             double ridge, RidgePolicy policy) {
  if (features.empty()) throw ConfigError("fit_linear: no feature rows");
  if (features.size() != targets.size())
    throw ConfigError("fit_linear: features/targets size mismatch");
  if (ridge < 0) throw ConfigError("fit_linear: ridge must be >= 0");
  const int p = map.output_dim();
  const Eigen::MatrixXd J = stack_features(features, p);
  const Eigen::MatrixXd T = stack_targets(targets);
  const auto m = J.rows();

  LinearSecondStage stage;
  stage.feature_map = map;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> piv(J);
  const auto& rdiag = piv.matrixR().diagonal();
  const auto rdn = std::min<Eigen::Index>(m, p);
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < rdn; ++i) {
    const double a = std::abs(rdiag(i));
    dmax = std::max(dmax, a);
    dmin = std::min(dmin, a);
  }
  stage.condition = dmax / std::max(dmin, 1e-300);
  const bool singular = m < p || dmax == 0.0 || dmin / dmax < 1e-12;

  double lambda = ridge;
  if (singular && ridge == 0.0) {
    if (policy == RidgePolicy::strict)
      throw RankDeficiencyError("fit_linear: singular Gram matrix with ridge 0",
                                stage.condition);
    lambda = 1e-10 * J.squaredNorm() / (double(m) * double(p));
    stage.rank_deficient = true;
  }

  if (lambda == 0.0) {
    stage.beta = Eigen::HouseholderQR<Eigen::MatrixXd>(J).solve(T);
  } else {
    // minimize (1/m)|J b - T|^2 + lambda |b|^2 via the stacked system
    Eigen::MatrixXd A(m + p, p);
    A.topRows(m) = J;
    A.bottomRows(p) =
        std::sqrt(lambda * double(m)) * Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + p, T.cols());
    B.topRows(m) = T;
    stage.beta = Eigen::HouseholderQR<Eigen::MatrixXd>(A).solve(B);
  }
  if (!stage.beta.allFinite())
    throw RankDeficiencyError("fit_linear: non-finite coefficients",
                              stage.condition);
  return stage;
}

ParameterVector predict(const LinearSecondStage& stage,
                        std::span<const double> z) {
  check_finite(z);
  const std::vector<double> f = stage.feature_map.features(z);
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(),
                                             static_cast<Eigen::Index>(f.size()));
  if (fv.size() != stage.beta.rows())
    throw ConfigError("predict: feature/beta dimension mismatch");
  const Eigen::VectorXd y = stage.beta.transpose() * fv;
  return ParameterVector(y.data(), y.data() + y.size());
}

ParameterVector predict(const MlpSecondStage& stage, std::span<const double> z) {
  check_finite(z);
  if (static_cast<Eigen::Index>(z.size()) != stage.w1.cols())
    throw ConfigError("predict: feature dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(),
                                             static_cast<Eigen::Index>(z.size()));
  const Eigen::VectorXd h = (stage.w1 * zv + stage.b1).cwiseMax(0.0);
  const Eigen::VectorXd y = stage.w2 * h + stage.b2;
  return ParameterVector(y.data(), y.data() + y.size());
}

ParameterVector predict(const LinearSecondStage& stage,
                        const CompressedFeatures& z) {
  return predict(stage, std::span<const double>(z.z));
}

ParameterVector predict(const MlpSecondStage& stage,
                        const CompressedFeatures& z) {
  return predict(stage, std::span<const double>(z.z));
}

namespace mlp_detail {

double loss(const Params& p, const Eigen::MatrixXd& X, const Eigen::MatrixXd& T) {
  const Eigen::MatrixXd A1 =
      (X * p.w1.transpose()).rowwise() + p.b1.transpose();
  const Eigen::MatrixXd R1 = A1.cwiseMax(0.0);
  const Eigen::MatrixXd out =
      (R1 * p.w2.transpose()).rowwise() + p.b2.transpose();
  return (out - T).squaredNorm() / double(X.rows());
}

Params gradient(const Params& p, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& T) {
  const Eigen::MatrixXd A1 =
      (X * p.w1.transpose()).rowwise() + p.b1.transpose();
  const Eigen::MatrixXd R1 = A1.cwiseMax(0.0);
  const Eigen::MatrixXd out =
      (R1 * p.w2.transpose()).rowwise() + p.b2.transpose();
  const Eigen::MatrixXd d = 2.0 * (out - T) / double(X.rows());
  Params g;
  g.w2 = d.transpose() * R1;
  g.b2 = d.colwise().sum().transpose();
  const Eigen::MatrixXd dr =
      (d * p.w2).cwiseProduct((A1.array() > 0.0).cast<double>().matrix());
  g.w1 = dr.transpose() * X;
  g.b1 = dr.colwise().sum().transpose();
  return g;
}

}  // namespace mlp_detail

MlpSecondStage fit_mlp(const std::vector<std::vector<double>>& features,
                       const std::vector<ParameterVector>& targets,
                       const MlpConfig& config) {
  if (features.empty()) throw ConfigError("fit_mlp: no feature rows");
  if (features.size() != targets.size())
    throw ConfigError("fit_mlp: features/targets size mismatch");
  if (config.hidden < 1 || config.batch < 1 || config.epochs < 0 ||
      config.step <= 0)
    throw ConfigError("fit_mlp: invalid config");

  const auto m = static_cast<Eigen::Index>(features.size());
  const auto n = static_cast<Eigen::Index>(features[0].size());
  Eigen::MatrixXd X(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = features[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw ConfigError("fit_mlp: feature row length mismatch");
    for (Eigen::Index j = 0; j < n; ++j) X(i, j) = row[static_cast<std::size_t>(j)];
  }
  const Eigen::MatrixXd T = stack_targets(targets);
  const auto d = T.cols();

  // standardize inputs for training; folded back into layer 1 afterwards
  Eigen::VectorXd mu = X.colwise().mean();
  Eigen::VectorXd sd(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = (X.col(j).array() - mu(j)).square().sum() / double(m);
    sd(j) = std::sqrt(std::max(v, 1e-300));
    if (sd(j) < 1e-12) sd(j) = 1.0;  // constant column: leave centered only
  }
  Eigen::MatrixXd Xs = (X.rowwise() - mu.transpose()).array().rowwise() /
                       sd.transpose().array();

  const int H = config.hidden;
  mlp_detail::Params p;
  GaussianStream ginit(config.seed.derived(stream_domain::mlp, 0));
  p.w1.resize(H, n);
  for (Eigen::Index i = 0; i < H; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      p.w1(i, j) = ginit.next() * std::sqrt(2.0 / double(n));
  p.b1 = Eigen::VectorXd::Zero(H);
  p.w2.resize(d, H);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < H; ++j)
      p.w2(i, j) = ginit.next() * std::sqrt(2.0 / double(H));
  p.b2 = Eigen::VectorXd::Zero(d);

  mlp_detail::Params mom{Eigen::MatrixXd::Zero(H, n), Eigen::VectorXd::Zero(H),
                         Eigen::MatrixXd::Zero(d, H), Eigen::VectorXd::Zero(d)};
  mlp_detail::Params vel = mom;

  UniformStream shuffle(config.seed.derived(stream_domain::mlp, 1));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
  const double b1c = 0.9, b2c = 0.999, eps = 1e-8;
  long step_count = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Eigen::Index>(i);
    for (std::size_t i = perm.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(shuffle.next() * double(i));
      std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
    }
    for (Eigen::Index i0 = 0; i0 < m; i0 += config.batch) {
      const Eigen::Index bsz = std::min<Eigen::Index>(config.batch, m - i0);
      Eigen::MatrixXd Xb(bsz, n), Tb(bsz, d);
      for (Eigen::Index r = 0; r < bsz; ++r) {
        Xb.row(r) = Xs.row(perm[static_cast<std::size_t>(i0 + r)]);
        Tb.row(r) = T.row(perm[static_cast<std::size_t>(i0 + r)]);
      }
      const mlp_detail::Params g = mlp_detail::gradient(p, Xb, Tb);
      ++step_count;
      const double bc1 = 1.0 - std::pow(b1c, double(step_count));
      const double bc2 = 1.0 - std::pow(b2c, double(step_count));
      auto adam = [&](Eigen::MatrixXd& w, Eigen::MatrixXd& mo, Eigen::MatrixXd& ve,
                      const Eigen::MatrixXd& gr) {
        mo = b1c * mo + (1.0 - b1c) * gr;
        ve = b2c * ve + (1.0 - b2c) * gr.cwiseProduct(gr);
        w -= config.step *
             (mo / bc1).cwiseQuotient(((ve / bc2).cwiseSqrt().array() + eps).matrix());
      };
      auto adam_v = [&](Eigen::VectorXd& w, Eigen::VectorXd& mo, Eigen::VectorXd& ve,
                        const Eigen::VectorXd& gr) {
        mo = b1c * mo + (1.0 - b1c) * gr;
        ve = b2c * ve + (1.0 - b2c) * gr.cwiseProduct(gr);
        w -= config.step *
             (mo / bc1).cwiseQuotient(((ve / bc2).cwiseSqrt().array() + eps).matrix());
      };
      adam(p.w1, mom.w1, vel.w1, g.w1);
      adam_v(p.b1, mom.b1, vel.b1, g.b1);
      adam(p.w2, mom.w2, vel.w2, g.w2);
      adam_v(p.b2, mom.b2, vel.b2, g.b2);
    }
    const double l = mlp_detail::loss(p, Xs, T);
    if (!std::isfinite(l))
      throw DivergenceError("fit_mlp: non-finite loss at epoch " +
                            std::to_string(epoch));
  }

  MlpSecondStage stage;
  // fold standardization: w1' = w1 diag(1/sd), b1' = b1 - w1 diag(1/sd) mu
  stage.w1 = p.w1;
  for (Eigen::Index j = 0; j < n; ++j) stage.w1.col(j) /= sd(j);
  stage.b1 = p.b1 - stage.w1 * mu;
  stage.w2 = p.w2;
  stage.b2 = p.b2;
  stage.training_mse = mlp_detail::loss(p, Xs, T);
  return stage;
}

}  // namespace twostage
