#include "twostage/estimator.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "twostage/parallel.hpp"
#include "twostage/rng.hpp"

namespace twostage {
namespace {

using json = nlohmann::json;

ObservationSeries simulate_record(const TsConfig& config,
                                  const ParameterVector& theta,
                                  const SeedSpec& seed) {
  if (std::holds_alternative<SnrModelSpec>(config.model)) {
    SnrModelSpec spec = std::get<SnrModelSpec>(config.model);
    spec.N = config.N;
    return simulate_snr(spec, theta, seed);
  }
  NonlinearSystemSpec spec = std::get<NonlinearSystemSpec>(config.model);
  spec.N = config.N;
  return simulate_nonlinear(spec, theta, seed);
}

CompressedFeatures compress_with(
    const std::variant<QuantileLevels, ArxOrder>& compressor,
    const ObservationSeries& series) {
  if (std::holds_alternative<QuantileLevels>(compressor))
    return compress_quantiles(series, std::get<QuantileLevels>(compressor));
  return compress_arx(series, std::get<ArxOrder>(compressor));
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto r = static_cast<Eigen::Index>(j.size());
  if (r == 0) throw IoError("model: empty matrix");
  const auto c = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != c)
      throw IoError("model: ragged matrix");
    for (Eigen::Index q = 0; q < c; ++q)
      m(i, q) = row.at(static_cast<std::size_t>(q)).get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

int TsConfig::compressor_dim() const {
  if (std::holds_alternative<QuantileLevels>(compressor))
    return std::get<QuantileLevels>(compressor).n;
  return std::get<ArxOrder>(compressor).total();
}

void TsConfig::validate() const {
  prior.validate();
  if (m < 1) throw ConfigError("ts config: m must be >= 1");
  if (N < 1) throw ConfigError("ts config: N must be >= 1");
  if (std::holds_alternative<ArxOrder>(compressor) &&
      std::holds_alternative<SnrModelSpec>(model))
    throw ConfigError("ts config: arx compressor requires a controlled model");
  if (second_stage.kind == SecondStageConfig::Kind::poly &&
      second_stage.degree < 0)
    throw ConfigError("ts config: polynomial degree must be >= 0");
}

CompressedFeatures TrainedEstimator::compress(
    const ObservationSeries& series) const {
  return compress_with(compressor, series);
}

TrainedEstimator train(const TsConfig& config) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();

  const auto thetas = sample_prior(
      config.prior, static_cast<std::size_t>(config.m),
      config.seed.derived(stream_domain::prior, 0));

  const auto m = static_cast<std::size_t>(config.m);
  std::vector<std::vector<double>> features(m);
  std::vector<std::string> failures(m);
  parallel_for(m, config.jobs, [&](std::size_t i) {
    try {
      const ObservationSeries rec = simulate_record(
          config, thetas[i], config.seed.derived(stream_domain::train_sim, i));
      features[i] = compress_with(config.compressor, rec).z;
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < m; ++i)
    if (!failures[i].empty())
      throw Error("train: record " + std::to_string(i) + ": " + failures[i]);

  TrainedEstimator est;
  est.compressor = config.compressor;
  if (config.second_stage.kind == SecondStageConfig::Kind::poly) {
    const PolyFeatureMap map =
        PolyFeatureMap::make(config.compressor_dim(), config.second_stage.degree);
    std::vector<std::vector<double>> rows(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = map.features(features[i]);
    LinearSecondStage stage =
        fit_linear(map, rows, thetas, config.ridge, RidgePolicy::auto_fallback);
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const ParameterVector pred = predict(stage, std::span<const double>(features[i]));
      for (std::size_t j = 0; j < pred.size(); ++j) {
        const double e = pred[j] - thetas[i][j];
        sq += e * e;
      }
    }
    est.meta.training_mse = sq / double(m);
    est.stage = std::move(stage);
  } else {
    MlpConfig mc = config.second_stage.mlp;
    mc.seed = config.seed.derived(stream_domain::mlp, 0);
    MlpSecondStage stage = fit_mlp(features, thetas, mc);
    est.meta.training_mse = stage.training_mse;
    est.stage = std::move(stage);
  }
  est.meta.m = config.m;
  est.meta.N = config.N;
  est.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return est;
}

ParameterVector infer(const TrainedEstimator& est,
                      const ObservationSeries& series) {
  const CompressedFeatures z = est.compress(series);
  if (std::holds_alternative<LinearSecondStage>(est.stage))
    return predict(std::get<LinearSecondStage>(est.stage), z);
  return predict(std::get<MlpSecondStage>(est.stage), z);
}

ParameterVector infer_timed(const TrainedEstimator& est,
                            const ObservationSeries& series, double& micros) {
  const auto t0 = std::chrono::steady_clock::now();
  ParameterVector out = infer(est, series);
  micros = std::chrono::duration<double, std::micro>(
               std::chrono::steady_clock::now() - t0)
               .count();
  return out;
}

std::string serialize_model(const TrainedEstimator& est) {
  json doc;
  doc["format"] = "twostage-model";
  doc["version"] = 1;
  if (std::holds_alternative<QuantileLevels>(est.compressor)) {
    doc["compressor"] = {{"kind", "quantile"},
                         {"n", std::get<QuantileLevels>(est.compressor).n}};
  } else {
    const auto& o = std::get<ArxOrder>(est.compressor);
    doc["compressor"] = {{"kind", "arx"}, {"n_a", o.n_a}, {"n_b", o.n_b}};
  }
  if (std::holds_alternative<LinearSecondStage>(est.stage)) {
    const auto& s = std::get<LinearSecondStage>(est.stage);
    doc["stage"] = {{"kind", "poly"},
                    {"input_dim", s.feature_map.input_dim()},
                    {"degree", s.feature_map.degree()},
                    {"beta", matrix_to_json(s.beta)},
                    {"rank_deficient", s.rank_deficient}};
  } else {
    const auto& s = std::get<MlpSecondStage>(est.stage);
    doc["stage"] = {{"kind", "mlp"},      {"w1", matrix_to_json(s.w1)},
                    {"b1", vector_to_json(s.b1)}, {"w2", matrix_to_json(s.w2)},
                    {"b2", vector_to_json(s.b2)}};
  }
  // wall_seconds stays in-memory only: serialized models must be
  // byte-identical across identical training runs
  doc["meta"] = {{"m", est.meta.m},
                 {"N", est.meta.N},
                 {"training_mse", est.meta.training_mse}};
  return doc.dump(2) + "\n";
}

TrainedEstimator deserialize_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("model: parse failure: ") + e.what());
  }
  if (doc.value("format", "") != "twostage-model")
    throw IoError("model: not a twostage model document");
  if (doc.value("version", 0) != 1)
    throw IoError("model: unsupported version");

  TrainedEstimator est;
  const auto& comp = doc.at("compressor");
  if (comp.at("kind") == "quantile") {
    est.compressor = QuantileLevels::make(comp.at("n").get<int>());
  } else if (comp.at("kind") == "arx") {
    est.compressor =
        ArxOrder::make(comp.at("n_a").get<int>(), comp.at("n_b").get<int>());
  } else {
    throw IoError("model: unknown compressor kind");
  }
  const auto& st = doc.at("stage");
  if (st.at("kind") == "poly") {
    LinearSecondStage s;
    s.feature_map = PolyFeatureMap::make(st.at("input_dim").get<int>(),
                                         st.at("degree").get<int>());
    s.beta = matrix_from_json(st.at("beta"));
    if (s.beta.rows() != s.feature_map.output_dim())
      throw IoError("model: beta rows do not match the feature map");
    s.rank_deficient = st.value("rank_deficient", false);
    est.stage = std::move(s);
  } else if (st.at("kind") == "mlp") {
    MlpSecondStage s;
    s.w1 = matrix_from_json(st.at("w1"));
    s.b1 = vector_from_json(st.at("b1"));
    s.w2 = matrix_from_json(st.at("w2"));
    s.b2 = vector_from_json(st.at("b2"));
    if (s.w2.cols() != s.w1.rows() || s.b1.size() != s.w1.rows() ||
        s.b2.size() != s.w2.rows())
      throw IoError("model: inconsistent mlp dimensions");
    est.stage = std::move(s);
  } else {
    throw IoError("model: unknown stage kind");
  }
  const auto& meta = doc.at("meta");
  est.meta.m = meta.at("m").get<int>();
  est.meta.N = meta.at("N").get<int>();
  est.meta.training_mse = meta.at("training_mse").get<double>();
  return est;
}

void save_model(const std::string& path, const TrainedEstimator& est) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open model file for writing: " + path);
  f << serialize_model(est);
  if (!f) throw IoError("failed writing model file: " + path);
}

TrainedEstimator load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace twostage
