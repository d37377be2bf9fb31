#pragma once

#include <span>
#include <vector>

#include "twostage/common.hpp"

namespace twostage {

/// Quantile levels gamma_k = k/(n+1), k = 1..n.
struct QuantileLevels {
  int n = 0;

  static QuantileLevels make(int n);
  std::vector<double> gammas() const;
  /// 1-based order-statistic index floor(k*N/(n+1)), computed in integer
  /// arithmetic and clamped to [1, N].
  std::size_t index(int k, std::size_t N) const;
};

struct ArxOrder {
  int n_a = 0;
  int n_b = 0;

  static ArxOrder make(int n_a, int n_b);
  int total() const { return n_a + n_b; }
};

enum class CompressorKind { quantile, arx };

struct CompressedFeatures {
  std::vector<double> z;
  CompressorKind source = CompressorKind::quantile;
  /// Set when the ARX fit needed the ridge fallback (degenerate regressors).
  bool rank_deficient = false;
};

/// Order statistics y_(floor(gamma_k N)) of the record, nondecreasing.
/// Requires N >= n+1.
CompressedFeatures compress_quantiles(const ObservationSeries& series,
                                      const QuantileLevels& levels);

/// Least-squares ARX(n_a, n_b) coefficients (y lags first, then u lags),
/// regression rows t = max(n_a, n_b)+1 .. N. Degenerate regressor columns
/// fall back to a ridge solve with penalty 1e-10 * trace(Gram)/n and flag
/// the result.
CompressedFeatures compress_arx(const ObservationSeries& series,
                                const ArxOrder& order);

/// Empirical gamma-quantile y_(floor(gamma N)) (clamped to [1, N]).
double empirical_quantile(std::span<const double> y, double gamma);

}  // namespace twostage
