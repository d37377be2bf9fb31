#pragma once

#include <string>
#include <vector>

#include "twostage/common.hpp"
#include "twostage/estimator.hpp"
#include "twostage/io.hpp"

namespace twostage {

struct GridCell {
  int m = 0;
  int N = 0;
};

struct CampaignSpec {
  enum class Experiment { consistency, normality, baseline_compare, bench };

  Experiment experiment = Experiment::consistency;
  std::vector<GridCell> grid;
  int runs = 100;
  double theta0 = 5.0;
  SeedSpec seed;
  std::string out_dir;
  unsigned jobs = 0;
  TsConfig ts;  // base estimator config; (m, N) come from the grid

  int pem_max_inits = 10;
  int crb_records = 100000;  // score-variance oracle sample size
  int bench_warmup = 30;
  int bench_reps = 200;

  void validate() const;
};

struct CellSummary {
  int m = 0;
  int N = 0;
  double mse = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double crb_paper = 0.0;        // SNR model only
  double crb_independent = 0.0;  // SNR model only
  bool has_crb = false;
  int failures = 0;
  double train_seconds = 0.0;  // timing.csv only
};

struct RunRecord {
  int cell_index = 0;
  int run = 0;
  std::string method;  // "ts", "ekf-large", "ekf-small", "pem-<k>"
  double theta0 = 0.0;
  double theta_hat = 0.0;
  bool ok = true;
  std::string error;
  double infer_micros = 0.0;  // timing.csv only
};

struct MethodTiming {
  std::string method;
  int reps = 0;
  double median_micros = 0.0;
  double iqr_micros = 0.0;
  int outliers = 0;  // beyond 1.5 IQR from the quartiles
};

struct NormalityStats {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_distance = 0.0;
  bool degenerate = false;  // zero-variance sample; moments reported as zero
};

struct BenchRow {
  std::string method;
  int N = 0;
  MethodTiming timing;
};

struct McSummary {
  std::vector<CellSummary> cells;
  std::vector<RunRecord> runs;
  std::vector<MethodTiming> timings;
  NormalityStats normality;
  std::vector<double> standardized_errors;  // normality experiment
  std::vector<BenchRow> bench;
  double ts_train_seconds = 0.0;  // baseline-compare: excluded from inference timing
};

/// Figure-1 style campaign: per grid cell, train a fresh estimator and
/// evaluate `runs` test records at theta0. A failed cell is recorded, not
/// fatal.
McSummary run_consistency(const CampaignSpec& spec);

/// Figure-2 style campaign: at the last grid cell, collect the standardized
/// errors sqrt(N) (theta_hat - theta0) and their normality statistics.
McSummary run_normality(const CampaignSpec& spec);

/// Appendix-B style comparison: one TS model (trained once, reused), both
/// EKF variants and multi-start PEM on fresh records at theta0 ~ prior.
McSummary run_baseline_compare(const CampaignSpec& spec);

/// Steady-state per-record inference latency for each method.
McSummary run_bench(const CampaignSpec& spec);

McSummary run_campaign(const CampaignSpec& spec);

/// Moment statistics of a standardized-error sample (degenerate-safe).
NormalityStats compute_normality_stats(const std::vector<double>& errors);

/// Write summary.csv / runs.csv / timing.csv under spec.out_dir. Only
/// timing.csv carries wall-clock values; the other two are deterministic.
void write_campaign_outputs(const CampaignSpec& spec, const McSummary& summary);

/// Recompute a consistency/normality summary from a runs.csv written by
/// write_campaign_outputs; bit-identical to the original aggregation.
std::vector<CellSummary> reaggregate_runs_csv(const std::string& runs_csv_path,
                                              const CampaignSpec& spec);

// --- configuration ----------------------------------------------------------

/// Parse a campaign config document (see configs/ for the annotated example).
CampaignSpec parse_campaign(const io::IniDoc& doc);
/// Parse the [model]/[prior]/[compressor]/[second_stage]/[train] sections.
TsConfig parse_ts_config(const io::IniDoc& doc);

/// Built-in campaigns reproducing the paper's studies at desk scale.
CampaignSpec default_consistency_campaign();
CampaignSpec default_normality_campaign();
CampaignSpec default_baseline_campaign();
CampaignSpec default_bench_campaign();

}  // namespace twostage
