#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "twostage/kernels/kernels.hpp"

namespace twostage::stats {

inline double mean(std::span<const double> x) {
  return kernels::sum(x) / static_cast<double>(x.size());
}

/// Two-pass sample variance with `ddof` delta degrees of freedom.
inline double variance(std::span<const double> x, int ddof = 1) {
  const double mu = mean(x);
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] - mu;
  return kernels::sumsq(c) / static_cast<double>(x.size() - ddof);
}

inline double median(std::vector<double> x) {
  const std::size_t n = x.size();
  auto mid = x.begin() + n / 2;
  std::nth_element(x.begin(), mid, x.end());
  if (n % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(x.begin(), mid);
  return 0.5 * (lo + hi);
}

/// p-quantile by linear interpolation of the sorted sample (reporting only;
/// the estimator path uses floor-index order statistics).
inline double interp_quantile(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  const double pos = p * static_cast<double>(x.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= x.size()) return x.back();
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * x[i] + w * x[i + 1];
}

inline double skewness(std::span<const double> x) {
  const double mu = mean(x);
  double m2 = 0, m3 = 0;
  for (double v : x) {
    const double d = v - mu;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

inline double excess_kurtosis(std::span<const double> x) {
  const double mu = mean(x);
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - mu;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

inline double pearson_correlation(std::span<const double> x,
                                  std::span<const double> y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Kolmogorov-Smirnov distance of a sample against a cdf.
template <class Cdf>
double ks_distance(std::vector<double> x, Cdf&& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace twostage::stats
