#pragma once

#include <string>
#include <variant>

#include "twostage/common.hpp"
#include "twostage/compression.hpp"
#include "twostage/regression.hpp"
#include "twostage/simulators.hpp"

namespace twostage {

struct SecondStageConfig {
  enum class Kind { poly, mlp };
  Kind kind = Kind::poly;
  int degree = 2;
  MlpConfig mlp;
};

struct TsConfig {
  PriorSpec prior;
  std::variant<SnrModelSpec, NonlinearSystemSpec> model;
  std::variant<QuantileLevels, ArxOrder> compressor;
  SecondStageConfig second_stage;
  int m = 0;          // training records
  int N = 0;          // record length
  double ridge = 0.0; // second-stage ridge (poly only)
  SeedSpec seed;
  unsigned jobs = 0;  // 0 = hardware threads

  int compressor_dim() const;
  void validate() const;
};

struct TrainingMeta {
  int m = 0;
  int N = 0;
  double training_mse = 0.0;
  double wall_seconds = 0.0;  // excluded from serialized comparisons
};

/// The deployable mapping y -> theta_hat: compressor descriptor plus fitted
/// second stage. Immutable after training; infer never mutates state.
struct TrainedEstimator {
  std::variant<QuantileLevels, ArxOrder> compressor;
  std::variant<LinearSecondStage, MlpSecondStage> stage;
  TrainingMeta meta;

  CompressedFeatures compress(const ObservationSeries& series) const;
  bool is_linear() const {
    return std::holds_alternative<LinearSecondStage>(stage);
  }
};

/// Offline training: sample the prior, simulate m records of length N,
/// compress each, fit the second stage on (features, theta) pairs.
/// Simulation/compression is parallel over records; fitting is sequential
/// with a fixed accumulation order, so the result is a pure function of the
/// config.
TrainedEstimator train(const TsConfig& config);

/// Single-pass inference: predict(second_stage, compress(series)).
ParameterVector infer(const TrainedEstimator& est,
                      const ObservationSeries& series);
/// As infer(), also reporting wall-clock microseconds of the pass.
ParameterVector infer_timed(const TrainedEstimator& est,
                            const ObservationSeries& series, double& micros);

/// Versioned structured-text model document; linear stages round-trip
/// bit-exactly.
std::string serialize_model(const TrainedEstimator& est);
TrainedEstimator deserialize_model(const std::string& text);
void save_model(const std::string& path, const TrainedEstimator& est);
TrainedEstimator load_model(const std::string& path);

}  // namespace twostage
