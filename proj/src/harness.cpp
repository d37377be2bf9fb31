#include "twostage/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "twostage/asymptotics.hpp"
#include "twostage/baselines.hpp"
#include "twostage/parallel.hpp"
#include "twostage/rng.hpp"
#include "twostage/stats.hpp"

namespace twostage {
namespace {

namespace domain {
// campaign-level stream domains (distinct from the library-internal ones)
constexpr std::uint16_t cell_train = 32;
constexpr std::uint16_t mc_run = 33;
constexpr std::uint16_t theta_draw = 34;
constexpr std::uint16_t pem_run = 35;
constexpr std::uint16_t bench_record = 36;
}  // namespace domain

std::uint64_t pack_cell_run(int cell, int run) {
  return (std::uint64_t(std::uint16_t(cell)) << 32) | std::uint32_t(run);
}

double now_micros_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::micro>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

CellSummary aggregate_cell(int cell_m, int cell_N, double theta0,
                           const std::vector<RunRecord>& cell_runs) {
  CellSummary c;
  c.m = cell_m;
  c.N = cell_N;
  double se = 0.0, s1 = 0.0;
  int K = 0;
  for (const RunRecord& r : cell_runs) {
    if (!r.ok) {
      ++c.failures;
      continue;
    }
    const double e = r.theta_hat - theta0;
    s1 += e;
    se += e * e;
    ++K;
  }
  if (K > 0) {
    c.bias = s1 / double(K);
    c.mse = se / double(K);
    double sc = 0.0;
    for (const RunRecord& r : cell_runs) {
      if (!r.ok) continue;
      const double d = (r.theta_hat - theta0) - c.bias;
      sc += d * d;
    }
    c.variance = sc / double(K);
  } else {
    c.mse = c.bias = c.variance = std::numeric_limits<double>::quiet_NaN();
  }
  return c;
}

TsConfig cell_config(const CampaignSpec& spec, const GridCell& cell, int index) {
  TsConfig ts = spec.ts;
  ts.m = cell.m;
  ts.N = cell.N;
  ts.seed = spec.seed.derived(domain::cell_train, std::uint64_t(index));
  ts.jobs = spec.jobs;
  return ts;
}

ObservationSeries simulate_test_record(const TsConfig& ts, double theta0,
                                       const SeedSpec& seed) {
  const ParameterVector theta{theta0};
  if (std::holds_alternative<SnrModelSpec>(ts.model)) {
    SnrModelSpec m = std::get<SnrModelSpec>(ts.model);
    m.N = ts.N;
    return simulate_snr(m, theta, seed);
  }
  NonlinearSystemSpec m = std::get<NonlinearSystemSpec>(ts.model);
  m.N = ts.N;
  return simulate_nonlinear(m, theta, seed);
}

MethodTiming summarize_timing(const std::string& method,
                              std::vector<double> micros) {
  MethodTiming t;
  t.method = method;
  t.reps = static_cast<int>(micros.size());
  if (micros.empty()) return t;
  t.median_micros = stats::median(micros);
  const double q1 = stats::interp_quantile(micros, 0.25);
  const double q3 = stats::interp_quantile(micros, 0.75);
  t.iqr_micros = q3 - q1;
  const double lo = q1 - 1.5 * t.iqr_micros, hi = q3 + 1.5 * t.iqr_micros;
  for (double v : micros)
    if (v < lo || v > hi) ++t.outliers;
  return t;
}

}  // namespace

void CampaignSpec::validate() const {
  if (grid.empty()) throw ConfigError("campaign: empty grid");
  if (runs < 1) throw ConfigError("campaign: runs must be >= 1");
  for (const GridCell& c : grid)
    if (c.m < 1 || c.N < 1)
      throw ConfigError("campaign: grid cells need m, N >= 1");
  if (out_dir.empty()) throw ConfigError("campaign: missing output directory");
}

NormalityStats compute_normality_stats(const std::vector<double>& errors) {
  NormalityStats s;
  if (errors.size() < 2) {
    s.degenerate = true;
    return s;
  }
  const double var = stats::variance(errors, 1);
  if (!(var > 0.0)) {
    s.degenerate = true;
    return s;
  }
  s.skewness = stats::skewness(errors);
  s.excess_kurtosis = stats::excess_kurtosis(errors);
  const double mu = stats::mean(errors);
  const double sd = std::sqrt(stats::variance(errors, 1));
  const GaussianDensity fitted = GaussianDensity::make(mu, sd * sd);
  s.ks_distance = stats::ks_distance(
      errors, [&](double x) { return fitted.cdf(x); });
  return s;
}

McSummary run_consistency(const CampaignSpec& spec) {
  spec.validate();
  McSummary out;
  for (std::size_t ci = 0; ci < spec.grid.size(); ++ci) {
    const GridCell cell = spec.grid[ci];
    const TsConfig ts = cell_config(spec, cell, int(ci));
    std::vector<RunRecord> cell_runs(std::size_t(spec.runs));
    double train_seconds = 0.0;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const TrainedEstimator est = train(ts);
      train_seconds = now_micros_since(t0) * 1e-6;
      parallel_for(cell_runs.size(), spec.jobs, [&](std::size_t r) {
        RunRecord rec;
        rec.cell_index = int(ci);
        rec.run = int(r);
        rec.method = "ts";
        rec.theta0 = spec.theta0;
        try {
          const ObservationSeries y = simulate_test_record(
              ts, spec.theta0,
              spec.seed.derived(domain::mc_run, pack_cell_run(int(ci), int(r))));
          double micros = 0.0;
          const ParameterVector th = infer_timed(est, y, micros);
          rec.theta_hat = th.at(0);
          rec.infer_micros = micros;
        } catch (const Error& e) {
          rec.ok = false;
          rec.error = e.what();
        }
        cell_runs[r] = std::move(rec);
      });
    } catch (const Error& e) {
      for (std::size_t r = 0; r < cell_runs.size(); ++r) {
        cell_runs[r].cell_index = int(ci);
        cell_runs[r].run = int(r);
        cell_runs[r].method = "ts";
        cell_runs[r].theta0 = spec.theta0;
        cell_runs[r].ok = false;
        cell_runs[r].error = std::string("train: ") + e.what();
      }
    }
    CellSummary cs = aggregate_cell(cell.m, cell.N, spec.theta0, cell_runs);
    cs.train_seconds = train_seconds;
    if (std::holds_alternative<SnrModelSpec>(spec.ts.model)) {
      const double mu = std::get<SnrModelSpec>(spec.ts.model).mu;
      cs.has_crb = true;
      cs.crb_paper = crb_snr(mu, spec.theta0, cell.N, CrbMode::paper);
      cs.crb_independent =
          crb_snr(mu, spec.theta0, cell.N, CrbMode::independent,
                  spec.seed.derived(domain::mc_run, pack_cell_run(int(ci), 1 << 30)),
                  spec.crb_records);
    }
    out.cells.push_back(cs);
    for (RunRecord& r : cell_runs) out.runs.push_back(std::move(r));
  }
  std::vector<double> micros;
  for (const RunRecord& r : out.runs)
    if (r.ok) micros.push_back(r.infer_micros);
  out.timings.push_back(summarize_timing("ts", std::move(micros)));
  return out;
}

McSummary run_normality(const CampaignSpec& spec) {
  spec.validate();
  McSummary out;
  const std::size_t ci = spec.grid.size() - 1;  // largest cell by convention
  const GridCell cell = spec.grid[ci];
  const TsConfig ts = cell_config(spec, cell, int(ci));
  const auto t0 = std::chrono::steady_clock::now();
  const TrainedEstimator est = train(ts);
  const double train_seconds = now_micros_since(t0) * 1e-6;

  std::vector<RunRecord> runs(std::size_t(spec.runs));
  parallel_for(runs.size(), spec.jobs, [&](std::size_t r) {
    RunRecord rec;
    rec.cell_index = int(ci);
    rec.run = int(r);
    rec.method = "ts";
    rec.theta0 = spec.theta0;
    try {
      const ObservationSeries y = simulate_test_record(
          ts, spec.theta0,
          spec.seed.derived(domain::mc_run, pack_cell_run(int(ci), int(r))));
      double micros = 0.0;
      rec.theta_hat = infer_timed(est, y, micros).at(0);
      rec.infer_micros = micros;
    } catch (const Error& e) {
      rec.ok = false;
      rec.error = e.what();
    }
    runs[r] = std::move(rec);
  });

  const double sqn = std::sqrt(double(cell.N));
  for (const RunRecord& r : runs)
    if (r.ok)
      out.standardized_errors.push_back(sqn * (r.theta_hat - spec.theta0));
  out.normality = compute_normality_stats(out.standardized_errors);
  CellSummary cs = aggregate_cell(cell.m, cell.N, spec.theta0, runs);
  cs.train_seconds = train_seconds;
  out.cells.push_back(cs);
  out.runs = std::move(runs);
  return out;
}

McSummary run_baseline_compare(const CampaignSpec& spec) {
  spec.validate();
  if (!std::holds_alternative<NonlinearSystemSpec>(spec.ts.model))
    throw ConfigError("baseline-compare requires the nonlinear model");
  McSummary out;

  const TsConfig ts = cell_config(spec, spec.grid[0], 0);
  const auto t0 = std::chrono::steady_clock::now();
  const TrainedEstimator est = train(ts);
  out.ts_train_seconds = now_micros_since(t0) * 1e-6;

  const auto thetas = sample_prior(spec.ts.prior, std::size_t(spec.runs),
                                   spec.seed.derived(domain::theta_draw, 0));

  std::vector<int> pem_variants;
  for (int k : {1, 5, 10})
    if (k <= spec.pem_max_inits) pem_variants.push_back(k);

  const std::size_t methods_per_run = 3 + pem_variants.size();
  std::vector<RunRecord> rows(std::size_t(spec.runs) * methods_per_run);

  parallel_for(std::size_t(spec.runs), spec.jobs, [&](std::size_t r) {
    const double th0 = thetas[r].at(0);
    std::size_t slot = r * methods_per_run;
    auto emit = [&](const std::string& method, auto&& fn) {
      RunRecord rec;
      rec.run = int(r);
      rec.method = method;
      rec.theta0 = th0;
      try {
        const auto tic = std::chrono::steady_clock::now();
        rec.theta_hat = fn();
        rec.infer_micros = now_micros_since(tic);
      } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      rows[slot++] = std::move(rec);
    };

    const ObservationSeries y = simulate_test_record(
        ts, th0, spec.seed.derived(domain::mc_run, r));

    emit("ts", [&] { return infer(est, y).at(0); });
    emit("ekf-large",
         [&] { return ekf_estimate(y, EkfConfig::large()).theta_hat; });
    emit("ekf-small",
         [&] { return ekf_estimate(y, EkfConfig::small()).theta_hat; });
    for (int k : pem_variants) {
      emit("pem-" + std::to_string(k), [&] {
        PemConfig pc;
        pc.n_init = k;
        pc.seed = spec.seed.derived(domain::pem_run, r);
        return pem_estimate(y, pc).theta_hat;
      });
    }
  });
  out.runs = std::move(rows);

  // per-method timing summaries
  std::vector<std::string> method_names = {"ts", "ekf-large", "ekf-small"};
  for (int k : pem_variants) method_names.push_back("pem-" + std::to_string(k));
  for (const std::string& m : method_names) {
    std::vector<double> micros;
    for (const RunRecord& r : out.runs)
      if (r.ok && r.method == m) micros.push_back(r.infer_micros);
    out.timings.push_back(summarize_timing(m, std::move(micros)));
  }
  return out;
}

McSummary run_bench(const CampaignSpec& spec) {
  spec.validate();
  McSummary out;
  const bool controlled =
      std::holds_alternative<NonlinearSystemSpec>(spec.ts.model);

  const TsConfig ts = cell_config(spec, spec.grid[0], 0);
  const TrainedEstimator est = train(ts);

  auto bench_fn = [&](const std::string& method, int N, auto&& fn) {
    std::vector<double> micros;
    micros.reserve(std::size_t(spec.bench_reps));
    for (int i = 0; i < spec.bench_warmup; ++i) fn();
    for (int i = 0; i < spec.bench_reps; ++i) {
      const auto tic = std::chrono::steady_clock::now();
      fn();
      micros.push_back(now_micros_since(tic));
    }
    BenchRow row;
    row.method = method;
    row.N = N;
    row.timing = summarize_timing(method, std::move(micros));
    out.bench.push_back(std::move(row));
  };

  for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
    TsConfig rts = ts;
    rts.N = spec.grid[gi].N;
    const ObservationSeries y = simulate_test_record(
        rts, spec.theta0, spec.seed.derived(domain::bench_record, gi));
    bench_fn("ts", rts.N, [&] { return infer(est, y).at(0); });
    if (controlled && gi == 0) {
      bench_fn("ekf-large", rts.N,
               [&] { return ekf_estimate(y, EkfConfig::large()).theta_hat; });
      bench_fn("ekf-small", rts.N,
               [&] { return ekf_estimate(y, EkfConfig::small()).theta_hat; });
      for (int k : {1, 5, 10}) {
        if (k > spec.pem_max_inits) continue;
        bench_fn("pem-" + std::to_string(k), rts.N, [&] {
          PemConfig pc;
          pc.n_init = k;
          pc.seed = spec.seed.derived(domain::pem_run, 0);
          return pem_estimate(y, pc).theta_hat;
        });
      }
    }
  }
  return out;
}

McSummary run_campaign(const CampaignSpec& spec) {
  switch (spec.experiment) {
    case CampaignSpec::Experiment::consistency:
      return run_consistency(spec);
    case CampaignSpec::Experiment::normality:
      return run_normality(spec);
    case CampaignSpec::Experiment::baseline_compare:
      return run_baseline_compare(spec);
    case CampaignSpec::Experiment::bench:
      return run_bench(spec);
  }
  throw ConfigError("campaign: unknown experiment");
}

// ---------------------------------------------------------------------------
// persistence
// ---------------------------------------------------------------------------

namespace {

std::string fd(double v) { return io::format_double(v); }

void write_consistency_outputs(const CampaignSpec& spec,
                               const McSummary& summary,
                               const std::filesystem::path& dir) {
  io::CsvWriter sum((dir / "summary.csv").string(),
                    {"cell", "m", "N", "ok_runs", "failures", "mse", "bias",
                     "variance", "crb_paper", "crb_independent"});
  for (std::size_t i = 0; i < summary.cells.size(); ++i) {
    const CellSummary& c = summary.cells[i];
    const int ok = spec.runs - c.failures;
    sum.row({std::to_string(i), std::to_string(c.m), std::to_string(c.N),
             std::to_string(ok), std::to_string(c.failures), fd(c.mse),
             fd(c.bias), fd(c.variance), c.has_crb ? fd(c.crb_paper) : "",
             c.has_crb ? fd(c.crb_independent) : ""});
  }
  sum.close();

  io::CsvWriter runs((dir / "runs.csv").string(), {"cell", "m", "N", "run", "theta0",
                                        "theta_hat", "ok", "error"});
  for (const RunRecord& r : summary.runs) {
    const GridCell cell = spec.grid[std::size_t(r.cell_index)];
    runs.row({std::to_string(r.cell_index), std::to_string(cell.m),
              std::to_string(cell.N), std::to_string(r.run), fd(r.theta0),
              r.ok ? fd(r.theta_hat) : "", r.ok ? "1" : "0", r.error});
  }
  runs.close();

  io::CsvWriter timing((dir / "timing.csv").string(), {"kind", "cell", "run", "method",
                                            "micros"});
  for (std::size_t i = 0; i < summary.cells.size(); ++i)
    timing.row({"train", std::to_string(i), "", "ts",
                fd(summary.cells[i].train_seconds * 1e6)});
  for (const RunRecord& r : summary.runs)
    if (r.ok)
      timing.row({"infer", std::to_string(r.cell_index), std::to_string(r.run),
                  r.method, fd(r.infer_micros)});
  timing.close();
}

void write_normality_outputs(const CampaignSpec& spec, const McSummary& summary,
                             const std::filesystem::path& dir) {
  const CellSummary& c = summary.cells.at(0);
  io::CsvWriter sum((dir / "summary.csv").string(),
                    {"m", "N", "runs", "ok_runs", "skewness",
                     "excess_kurtosis", "ks_distance", "degenerate"});
  sum.row({std::to_string(c.m), std::to_string(c.N), std::to_string(spec.runs),
           std::to_string(spec.runs - c.failures), fd(summary.normality.skewness),
           fd(summary.normality.excess_kurtosis),
           fd(summary.normality.ks_distance),
           summary.normality.degenerate ? "1" : "0"});
  sum.close();

  io::CsvWriter runs((dir / "runs.csv").string(),
                     {"run", "theta0", "theta_hat", "scaled_error", "ok",
                      "error"});
  const double sqn = std::sqrt(double(c.N));
  for (const RunRecord& r : summary.runs)
    runs.row({std::to_string(r.run), fd(r.theta0), r.ok ? fd(r.theta_hat) : "",
              r.ok ? fd(sqn * (r.theta_hat - r.theta0)) : "",
              r.ok ? "1" : "0", r.error});
  runs.close();

  io::CsvWriter timing((dir / "timing.csv").string(),
                       {"kind", "cell", "run", "method", "micros"});
  timing.row({"train", "0", "", "ts", fd(c.train_seconds * 1e6)});
  for (const RunRecord& r : summary.runs)
    if (r.ok)
      timing.row({"infer", "0", std::to_string(r.run), r.method,
                  fd(r.infer_micros)});
  timing.close();
}

void write_baseline_outputs(const CampaignSpec& spec, const McSummary& summary,
                            const std::filesystem::path& dir) {
  std::vector<std::string> methods;
  for (const MethodTiming& t : summary.timings) methods.push_back(t.method);

  io::CsvWriter sum((dir / "summary.csv").string(),
                    {"method", "ok_runs", "failures", "median_abs_error",
                     "mean_abs_error"});
  for (const std::string& m : methods) {
    std::vector<double> abserr;
    int failures = 0;
    for (const RunRecord& r : summary.runs) {
      if (r.method != m) continue;
      if (!r.ok) {
        ++failures;
        continue;
      }
      abserr.push_back(std::abs(r.theta_hat - r.theta0));
    }
    const double med = abserr.empty()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : stats::median(abserr);
    const double mean = abserr.empty()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : stats::mean(abserr);
    sum.row({m, std::to_string(abserr.size()), std::to_string(failures),
             fd(med), fd(mean)});
  }
  sum.close();

  io::CsvWriter runs((dir / "runs.csv").string(),
                     {"run", "method", "theta0", "theta_hat", "ok", "error"});
  for (const RunRecord& r : summary.runs)
    runs.row({std::to_string(r.run), r.method, fd(r.theta0),
              r.ok ? fd(r.theta_hat) : "", r.ok ? "1" : "0", r.error});
  runs.close();

  io::CsvWriter timing((dir / "timing.csv").string(),
                       {"kind", "run", "method", "micros", "iqr_micros",
                        "outliers"});
  timing.row({"train", "", "ts", fd(summary.ts_train_seconds * 1e6), "", ""});
  for (const RunRecord& r : summary.runs)
    if (r.ok)
      timing.row({"infer", std::to_string(r.run), r.method,
                  fd(r.infer_micros), "", ""});
  for (const MethodTiming& t : summary.timings)
    timing.row({"summary", "", t.method, fd(t.median_micros),
                fd(t.iqr_micros), std::to_string(t.outliers)});
  timing.close();
}

void write_bench_outputs(const CampaignSpec& spec, const McSummary& summary,
                         const std::filesystem::path& dir) {
  io::CsvWriter sum((dir / "summary.csv").string(), {"method", "N", "reps"});
  for (const BenchRow& b : summary.bench)
    sum.row({b.method, std::to_string(b.N), std::to_string(spec.bench_reps)});
  sum.close();

  io::CsvWriter runs((dir / "runs.csv").string(), {"method", "N"});
  for (const BenchRow& b : summary.bench)
    runs.row({b.method, std::to_string(b.N)});
  runs.close();

  io::CsvWriter timing((dir / "timing.csv").string(),
                       {"method", "N", "reps", "median_micros", "iqr_micros",
                        "outliers"});
  for (const BenchRow& b : summary.bench)
    timing.row({b.method, std::to_string(b.N), std::to_string(b.timing.reps),
                fd(b.timing.median_micros), fd(b.timing.iqr_micros),
                std::to_string(b.timing.outliers)});
  timing.close();
}

}  // namespace

void write_campaign_outputs(const CampaignSpec& spec, const McSummary& summary) {
  const std::filesystem::path dir(spec.out_dir);
  std::filesystem::create_directories(dir);
  switch (spec.experiment) {
    case CampaignSpec::Experiment::consistency:
      write_consistency_outputs(spec, summary, dir);
      return;
    case CampaignSpec::Experiment::normality:
      write_normality_outputs(spec, summary, dir);
      return;
    case CampaignSpec::Experiment::baseline_compare:
      write_baseline_outputs(spec, summary, dir);
      return;
    case CampaignSpec::Experiment::bench:
      write_bench_outputs(spec, summary, dir);
      return;
  }
}

std::vector<CellSummary> reaggregate_runs_csv(const std::string& runs_csv_path,
                                              const CampaignSpec& spec) {
  const auto rows = io::read_csv(runs_csv_path);
  if (rows.empty() || rows[0].size() < 8 || rows[0][0] != "cell")
    throw IoError("reaggregate: not a consistency runs.csv: " + runs_csv_path);
  std::vector<std::vector<RunRecord>> by_cell(spec.grid.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    RunRecord rec;
    rec.cell_index = std::stoi(r[0]);
    rec.run = std::stoi(r[3]);
    rec.theta0 = std::strtod(r[4].c_str(), nullptr);
    rec.ok = (r[6] == "1");
    if (rec.ok) rec.theta_hat = std::strtod(r[5].c_str(), nullptr);
    by_cell.at(std::size_t(rec.cell_index)).push_back(std::move(rec));
  }
  std::vector<CellSummary> cells;
  for (std::size_t ci = 0; ci < by_cell.size(); ++ci) {
    std::sort(by_cell[ci].begin(), by_cell[ci].end(),
              [](const RunRecord& a, const RunRecord& b) { return a.run < b.run; });
    cells.push_back(aggregate_cell(spec.grid[ci].m, spec.grid[ci].N,
                                   spec.theta0, by_cell[ci]));
  }
  return cells;
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

namespace {

std::vector<GridCell> parse_grid(const std::string& text) {
  std::vector<GridCell> grid;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto x = tok.find('x');
    if (x == std::string::npos)
      throw ConfigError("grid cells must look like mxN, got: " + tok);
    GridCell c;
    c.m = std::stoi(tok.substr(0, x));
    c.N = std::stoi(tok.substr(x + 1));
    grid.push_back(c);
  }
  if (grid.empty()) throw ConfigError("grid: no cells");
  return grid;
}

}  // namespace

TsConfig parse_ts_config(const io::IniDoc& doc) {
  TsConfig ts;
  const std::string model_kind = doc.get("model", "kind");
  if (model_kind == "snr") {
    SnrModelSpec m;
    m.mu = doc.get_double("model", "mu");
    ts.model = m;
  } else if (model_kind == "nonlinear") {
    NonlinearSystemSpec m;
    if (doc.has("model", "v11_var")) m.v11_var = doc.get_double("model", "v11_var");
    if (doc.has("model", "v12_var")) m.v12_var = doc.get_double("model", "v12_var");
    if (doc.has("model", "v2_var")) m.v2_var = doc.get_double("model", "v2_var");
    if (doc.has("model", "input_var"))
      m.input_var = doc.get_double("model", "input_var");
    ts.model = m;
  } else {
    throw ConfigError("model kind must be snr or nonlinear, got: " + model_kind);
  }

  ts.prior.lower = {doc.get_double("prior", "lower")};
  ts.prior.upper = {doc.get_double("prior", "upper")};

  const std::string comp_kind = doc.get("compressor", "kind");
  if (comp_kind == "quantile") {
    ts.compressor = QuantileLevels::make(int(doc.get_int("compressor", "n")));
  } else if (comp_kind == "arx") {
    ts.compressor = ArxOrder::make(int(doc.get_int("compressor", "na")),
                                   int(doc.get_int("compressor", "nb")));
  } else {
    throw ConfigError("compressor kind must be quantile or arx, got: " +
                      comp_kind);
  }

  const std::string stage_kind = doc.get("second_stage", "kind");
  if (stage_kind == "poly") {
    ts.second_stage.kind = SecondStageConfig::Kind::poly;
    ts.second_stage.degree = int(doc.get_int("second_stage", "degree"));
  } else if (stage_kind == "mlp") {
    ts.second_stage.kind = SecondStageConfig::Kind::mlp;
    MlpConfig& mc = ts.second_stage.mlp;
    if (doc.has("second_stage", "hidden"))
      mc.hidden = int(doc.get_int("second_stage", "hidden"));
    if (doc.has("second_stage", "epochs"))
      mc.epochs = int(doc.get_int("second_stage", "epochs"));
    if (doc.has("second_stage", "batch"))
      mc.batch = int(doc.get_int("second_stage", "batch"));
    if (doc.has("second_stage", "step"))
      mc.step = doc.get_double("second_stage", "step");
  } else {
    throw ConfigError("second_stage kind must be poly or mlp, got: " +
                      stage_kind);
  }

  if (doc.has_section("train")) {
    if (doc.has("train", "m")) ts.m = int(doc.get_int("train", "m"));
    if (doc.has("train", "N")) ts.N = int(doc.get_int("train", "N"));
    if (doc.has("train", "ridge")) ts.ridge = doc.get_double("train", "ridge");
  }
  return ts;
}

CampaignSpec parse_campaign(const io::IniDoc& doc) {
  CampaignSpec spec;
  const std::string exp = doc.get("campaign", "experiment");
  if (exp == "consistency")
    spec.experiment = CampaignSpec::Experiment::consistency;
  else if (exp == "normality")
    spec.experiment = CampaignSpec::Experiment::normality;
  else if (exp == "baseline-compare")
    spec.experiment = CampaignSpec::Experiment::baseline_compare;
  else if (exp == "bench")
    spec.experiment = CampaignSpec::Experiment::bench;
  else
    throw ConfigError("unknown experiment: " + exp);

  spec.runs = int(doc.get_int("campaign", "runs"));
  if (doc.has("campaign", "theta0"))
    spec.theta0 = doc.get_double("campaign", "theta0");
  spec.seed.master_seed =
      std::uint64_t(doc.get_int("campaign", "master_seed"));
  if (doc.has("campaign", "stream_id"))
    spec.seed.stream_id = std::uint64_t(doc.get_int("campaign", "stream_id"));
  spec.out_dir = doc.get_or("campaign", "out", "");
  if (doc.has("campaign", "jobs"))
    spec.jobs = unsigned(doc.get_int("campaign", "jobs"));
  if (doc.has("campaign", "pem_max_inits"))
    spec.pem_max_inits = int(doc.get_int("campaign", "pem_max_inits"));
  if (doc.has("campaign", "crb_records"))
    spec.crb_records = int(doc.get_int("campaign", "crb_records"));
  if (doc.has("campaign", "bench_warmup"))
    spec.bench_warmup = int(doc.get_int("campaign", "bench_warmup"));
  if (doc.has("campaign", "bench_reps"))
    spec.bench_reps = int(doc.get_int("campaign", "bench_reps"));

  spec.grid = parse_grid(doc.get("grid", "cells"));
  spec.ts = parse_ts_config(doc);
  return spec;
}

CampaignSpec default_consistency_campaign() {
  CampaignSpec spec;
  spec.experiment = CampaignSpec::Experiment::consistency;
  spec.grid = {{100, 100}, {1000, 1000}, {10000, 10000}};
  spec.runs = 100;
  spec.theta0 = 5.0;
  spec.seed = SeedSpec{12345, 0};
  TsConfig& ts = spec.ts;
  ts.prior.lower = {2.0};
  ts.prior.upper = {10.0};
  ts.model = SnrModelSpec{5.0, 0};
  ts.compressor = QuantileLevels::make(5);
  ts.second_stage.kind = SecondStageConfig::Kind::poly;
  ts.second_stage.degree = 2;
  return spec;
}

CampaignSpec default_normality_campaign() {
  CampaignSpec spec = default_consistency_campaign();
  spec.experiment = CampaignSpec::Experiment::normality;
  spec.grid = {{10000, 10000}};
  spec.runs = 500;
  return spec;
}

CampaignSpec default_baseline_campaign() {
  CampaignSpec spec;
  spec.experiment = CampaignSpec::Experiment::baseline_compare;
  spec.grid = {{2000, 1000}};
  spec.runs = 100;
  spec.seed = SeedSpec{12345, 0};
  TsConfig& ts = spec.ts;
  ts.prior.lower = {-0.9};
  ts.prior.upper = {0.9};
  ts.model = NonlinearSystemSpec{};
  ts.compressor = ArxOrder::make(5, 5);
  ts.second_stage.kind = SecondStageConfig::Kind::mlp;
  return spec;
}

CampaignSpec default_bench_campaign() {
  CampaignSpec spec = default_baseline_campaign();
  spec.experiment = CampaignSpec::Experiment::bench;
  spec.grid = {{2000, 1000}, {2000, 2000}};
  spec.theta0 = 0.5;
  return spec;
}

}  // namespace twostage
