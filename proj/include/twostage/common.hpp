#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twostage {

// ---------------------------------------------------------------------------
// Errors. Every failure mode surfaced by the library is one of these; the CLI
// maps them to a machine-readable error line and a nonzero exit code.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad bounds, dimension mismatch, unknown keys).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A record is too short for the requested compression.
class InputTooShortError : public Error {
public:
  using Error::Error;
};

/// Singular or numerically rank-deficient regression problem.
class RankDeficiencyError : public Error {
public:
  RankDeficiencyError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

private:
  double condition_ = 0.0;
};

/// A filter or iterative fit produced non-finite state.
class DivergenceError : public Error {
public:
  using Error::Error;
};

/// Density support violation (zero density at a requested quantile).
class SupportError : public Error {
public:
  using Error::Error;
};

/// Simulation model produced non-finite values everywhere it was evaluated.
class ModelExplosionError : public Error {
public:
  using Error::Error;
};

/// File/format problems on the CSV and model-document paths.
class IoError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Seeds. A (master_seed, stream_id) pair names one deterministic random
// stream; the generator is counter-based, so any element of a stream can be
// produced without generating its predecessors. Distinct stream ids give
// independent streams.
// ---------------------------------------------------------------------------

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// Derive a child stream for an internal purpose. (domain, index) pairs map
  /// injectively onto stream ids via a bijective mixer, so no two internal
  /// consumers of the same seed ever share a stream.
  SeedSpec derived(std::uint16_t domain, std::uint64_t index) const;
};

/// Stream-domain tags used by the library's internal derivations.
namespace stream_domain {
inline constexpr std::uint16_t prior = 1;
inline constexpr std::uint16_t train_sim = 2;
inline constexpr std::uint16_t test_sim = 3;
inline constexpr std::uint16_t mlp = 4;
inline constexpr std::uint16_t pem_init = 5;
inline constexpr std::uint16_t clt_run = 6;
inline constexpr std::uint16_t score_mc = 7;
inline constexpr std::uint16_t noise_u = 8;
inline constexpr std::uint16_t noise_v11 = 9;
inline constexpr std::uint16_t noise_v12 = 10;
inline constexpr std::uint16_t noise_v2 = 11;
}  // namespace stream_domain

// ---------------------------------------------------------------------------
// Domain types shared by all modules.
// ---------------------------------------------------------------------------

/// Model parameters; length d >= 1, fixed per experiment.
using ParameterVector = std::vector<double>;

/// Uniform-box prior over the parameter space.
struct PriorSpec {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  void validate() const;
};

/// One simulated or observed record. `inputs` is empty for autonomous
/// models and has the same length as `outputs` for controlled systems.
struct ObservationSeries {
  std::vector<double> outputs;
  std::vector<double> inputs;
  std::optional<ParameterVector> theta_label;

  std::size_t length() const { return outputs.size(); }
  bool has_inputs() const { return !inputs.empty(); }
  void validate() const;
};

}  // namespace twostage
