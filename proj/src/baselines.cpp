#include "twostage/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "twostage/parallel.hpp"
#include "twostage/rng.hpp"
#include "twostage/simulators.hpp"

namespace twostage {
namespace {

double clamp_theta(double th, double lo = -0.9, double hi = 0.9) {
  return std::clamp(th, lo, hi);
}

}  // namespace

Eigen::Matrix3d ekf_transition_jacobian(const Eigen::Vector3d& x, double u) {
  const double x2 = x(1), th = x(2);
  const double th2 = th * th;
  const double s = std::sin(50.0 * th2);
  const double c = std::cos(50.0 * th2);
  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();
  F(0, 0) = 0.5;
  F(1, 1) = (1.0 - th2) * s - th;
  F(1, 2) = x2 * (-2.0 * th * s + (1.0 - th2) * 100.0 * th * c) - x2 +
            u * (1.0 - th2) / ((1.0 + th2) * (1.0 + th2));
  F(2, 2) = 1.0;
  return F;
}

EkfResult ekf_estimate(const ObservationSeries& series, const EkfConfig& config,
                       bool keep_trace) {
  if (!series.has_inputs()) throw ConfigError("ekf: series has no inputs");
  if (!(config.R > 0.0)) throw ConfigError("ekf: R must be > 0");

  const std::size_t N = series.length();
  Eigen::Vector3d x = config.x0;
  Eigen::Matrix3d P = config.P0;
  EkfResult out;
  if (keep_trace) out.trace.reserve(N);

  const Eigen::Vector3d h(0.0, 1.0, 0.0);  // measurement row
  for (std::size_t k = 0; k < N; ++k) {
    // update with y_k
    const double innov = series.outputs[k] - x(1);
    const double S = P(1, 1) + config.R;
    const Eigen::Vector3d K = P.col(1) / S;
    x += K * innov;
    const Eigen::Matrix3d IKH = Eigen::Matrix3d::Identity() - K * h.transpose();
    P = IKH * P * IKH.transpose() + K * config.R * K.transpose();  // Joseph form
    P = 0.5 * (P + P.transpose());
    if (!x.allFinite() || !P.allFinite())
      throw DivergenceError("ekf: non-finite state/covariance at step " +
                            std::to_string(k));
    if (keep_trace) out.trace.push_back({x, P});
    if (k + 1 == N) break;

    // predict through the augmented dynamics with input u_k
    const double u = series.inputs[k];
    const Eigen::Matrix3d F = ekf_transition_jacobian(x, u);
    const double th = x(2);
    const Eigen::Vector3d xn(0.5 * x(0) + u,
                             nonlinear_a(th) * x(1) + nonlinear_b(th) * u, th);
    P = F * P * F.transpose() + config.Q;
    P = 0.5 * (P + P.transpose());
    x = xn;
    if (!x.allFinite() || !P.allFinite())
      throw DivergenceError("ekf: non-finite prediction at step " +
                            std::to_string(k));
  }
  out.theta_hat = clamp_theta(x(2));
  return out;
}

double pem_objective(double theta, const ObservationSeries& series) {
  const double a = nonlinear_a(theta);
  const double b = nonlinear_b(theta);
  double x2 = 0.0;
  double v = 0.0;
  const std::size_t N = series.length();
  for (std::size_t k = 0; k < N; ++k) {
    const double e = series.outputs[k] - x2;
    v += e * e;
    x2 = a * x2 + b * series.inputs[k];
  }
  return v;
}

namespace {

struct Bracket {
  double a, b;    // bracket endpoints
  double x, fx;   // interior candidate
};

// Expand geometrically from x0 until the objective rises on both sides (or
// the bounds stop us).
Bracket bracket_minimum(const std::function<double(double)>& f, double x0,
                        double lo, double hi) {
  const double f0 = f(x0);
  double step = 0.01;
  double a = std::max(lo, x0 - step), b = std::min(hi, x0 + step);
  double fa = f(a), fb = f(b);
  double xm = x0, fm = f0;
  int guard = 0;
  while (fa < fm && a > lo && guard++ < 64) {
    b = xm;
    fb = fm;
    xm = a;
    fm = fa;
    step *= 1.6;
    a = std::max(lo, a - step);
    fa = f(a);
  }
  guard = 0;
  while (fb < fm && b < hi && guard++ < 64) {
    a = xm;
    fa = fm;
    xm = b;
    fm = fb;
    step *= 1.6;
    b = std::min(hi, b + step);
    fb = f(b);
  }
  return Bracket{a, b, xm, fm};
}

// Golden-section refined by quadratic interpolation steps (Brent-style,
// derivative-free) on [a, b] with interior start x.
void refine_minimum(const std::function<double(double)>& f, Bracket& br,
                    double tol, int max_iter) {
  constexpr double kGold = 0.3819660112501051;  // (3 - sqrt(5)) / 2
  double a = br.a, b = br.b;
  double x = br.x, w = br.x, v = br.x;
  double fx = br.fx, fw = br.fx, fv = br.fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      // parabola through (x, w, v)
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etmp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etmp) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double uu = x + d;
        if (uu - a < tol2 || b - uu < tol2) d = (m > x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m) ? b - x : a - x;
      d = kGold * e;
    }
    const double u =
        (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  br.x = x;
  br.fx = fx;
}

}  // namespace

PemResult pem_estimate(const ObservationSeries& series,
                       const PemConfig& config) {
  if (!series.has_inputs()) throw ConfigError("pem: series has no inputs");
  if (config.n_init < 1) throw ConfigError("pem: n_init must be >= 1");
  if (!(config.theta_lo < config.theta_hi))
    throw ConfigError("pem: invalid theta bounds");

  const auto objective = [&](double th) { return pem_objective(th, series); };

  // prefix-stable init sequence: init i is the i-th uniform of the stream
  std::vector<double> inits(static_cast<std::size_t>(config.n_init));
  kernels::fill_uniform(config.seed.derived(stream_domain::pem_init, 0), 0,
                        inits);
  for (double& v : inits)
    v = config.theta_lo + v * (config.theta_hi - config.theta_lo);

  PemResult out;
  out.per_init.resize(inits.size());
  parallel_for(inits.size(), 0, [&](std::size_t i) {
    const double x0 = inits[i];
    Bracket br =
        bracket_minimum(objective, x0, config.theta_lo, config.theta_hi);
    refine_minimum(objective, br, config.tol, config.max_iter);
    out.per_init[i] = PemInitRecord{x0, clamp_theta(br.x, config.theta_lo,
                                                    config.theta_hi),
                                    br.fx};
  });

  std::size_t best = 0;
  bool any_finite = false;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.per_init.size(); ++i) {
    const double fo = out.per_init[i].objective;
    if (std::isfinite(fo)) any_finite = true;
    if (fo < best_obj) {
      best_obj = fo;
      best = i;
    }
  }
  if (!any_finite)
    throw ModelExplosionError("pem: objective non-finite at every candidate");
  out.theta_hat = out.per_init[best].minimizer;
  out.best_objective = out.per_init[best].objective;
  return out;
}

}  // namespace twostage
