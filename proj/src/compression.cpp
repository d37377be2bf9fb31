#include "twostage/compression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace twostage {

QuantileLevels QuantileLevels::make(int n) {
  if (n < 1) throw ConfigError("quantile levels: n must be >= 1");
  return QuantileLevels{n};
}

std::vector<double> QuantileLevels::gammas() const {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    g[static_cast<std::size_t>(k - 1)] = double(k) / double(n + 1);
  return g;
}

std::size_t QuantileLevels::index(int k, std::size_t N) const {
  // integer arithmetic: floor(k*N/(n+1)) exactly, no floating floor
  std::size_t idx = (static_cast<std::size_t>(k) * N) /
                    static_cast<std::size_t>(n + 1);
  return std::clamp<std::size_t>(idx, 1, N);
}

ArxOrder ArxOrder::make(int n_a, int n_b) {
  if (n_a < 0 || n_b < 0 || n_a + n_b < 1)
    throw ConfigError("arx order: need n_a, n_b >= 0 and n_a + n_b >= 1");
  return ArxOrder{n_a, n_b};
}

CompressedFeatures compress_quantiles(const ObservationSeries& series,
                                      const QuantileLevels& levels) {
  const std::size_t N = series.length();
  if (N < static_cast<std::size_t>(levels.n) + 1)
    throw InputTooShortError("compress_quantiles: need N >= n+1");

  std::vector<double> scratch(series.outputs);
  CompressedFeatures out;
  out.source = CompressorKind::quantile;
  out.z.resize(static_cast<std::size_t>(levels.n));

  // selection via chained nth_element over shrinking tails
  std::size_t done = 0;  // elements before `done` are already partitioned off
  for (int k = 1; k <= levels.n; ++k) {
    const std::size_t idx = levels.index(k, N);  // 1-based
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(idx - 1);
    if (idx - 1 >= done) {
      std::nth_element(scratch.begin() + static_cast<std::ptrdiff_t>(done), nth,
                       scratch.end());
      done = idx;  // everything up to idx-1 is now <= *nth
    }
    out.z[static_cast<std::size_t>(k - 1)] = *nth;
  }
  return out;
}

double empirical_quantile(std::span<const double> y, double gamma) {
  if (y.empty()) throw InputTooShortError("empirical_quantile: empty sample");
  const auto N = y.size();
  auto idx = static_cast<std::size_t>(
      std::floor(gamma * static_cast<double>(N)));
  idx = std::clamp<std::size_t>(idx, 1, N);
  std::vector<double> scratch(y.begin(), y.end());
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(idx - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

CompressedFeatures compress_arx(const ObservationSeries& series,
                                const ArxOrder& order) {
  if (!series.has_inputs())
    throw ConfigError("compress_arx: series has no inputs");
  const int na = order.n_a, nb = order.n_b, n = order.total();
  const auto N = static_cast<std::ptrdiff_t>(series.length());
  const std::ptrdiff_t start = std::max(na, nb);  // first row predicts y[start]
  const std::ptrdiff_t rows = N - start;
  if (rows <= n)
    throw InputTooShortError("compress_arx: need N - max(n_a,n_b) > n_a + n_b");

  const auto& y = series.outputs;
  const auto& u = series.inputs;
  Eigen::MatrixXd phi(rows, n);
  Eigen::VectorXd t(rows);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const std::ptrdiff_t k = start + r;  // 0-based time of the predicted sample
    for (int i = 0; i < na; ++i) phi(r, i) = y[static_cast<std::size_t>(k - 1 - i)];
    for (int i = 0; i < nb; ++i)
      phi(r, na + i) = u[static_cast<std::size_t>(k - 1 - i)];
    t(r) = y[static_cast<std::size_t>(k)];
  }

  CompressedFeatures out;
  out.source = CompressorKind::arx;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
  const auto& rdiag = qr.matrixR().diagonal();
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(rdiag(i));
    dmax = std::max(dmax, a);
    dmin = std::min(dmin, a);
  }
  Eigen::VectorXd xi;
  if (dmax == 0.0 || dmin / dmax < 1e-12) {
    // ridge fallback keeps degenerate training draws usable but observable
    const Eigen::MatrixXd gram = phi.transpose() * phi;
    const double lambda = 1e-10 * gram.trace() / double(n);
    Eigen::MatrixXd reg = gram;
    reg.diagonal().array() += lambda;
    xi = reg.ldlt().solve(phi.transpose() * t);
    out.rank_deficient = true;
  } else {
    xi = qr.solve(t);
  }
  out.z.assign(xi.data(), xi.data() + n);
  for (double v : out.z)
    if (!std::isfinite(v))
      throw RankDeficiencyError("compress_arx: non-finite coefficients",
                                dmax / std::max(dmin, 1e-300));
  return out;
}

}  // namespace twostage
