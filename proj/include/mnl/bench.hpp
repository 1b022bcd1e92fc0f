#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mnl/model.hpp"
#include "mnl/runner.hpp"

namespace mnl {

enum class ExperimentKind { Single, SweepD, SweepK, Profile, Robustness, Trajectory };
enum class Strategy { Random, Static, Adaptive };

std::string to_string(ExperimentKind kind);
std::string to_string(Strategy strategy);
ExperimentKind experiment_kind_from_string(const std::string& name);
Strategy strategy_from_string(const std::string& name);

// The benchmark family from the linear best-arm literature: basis arms
// e_1..e_d, one extra arm [cos w, sin w, 0, ...] close to the best arm, and
// theta* = [2, 0, ..., 0]. All arms are unit norm; arm 0 is best and arm d
// the close runner-up with utility gap 2(1 - cos w).
Instance standard_instance(int d, double omega = 0.01, int subset_size = 3,
                           double delta = 0.05);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Single;
  std::vector<int> d_list{4};
  std::vector<int> k_list{3};
  double omega = 0.3;  // desk-scale default; 0.01 reproduces the paper-scale instance
  double sigma = 1.0;  // RUM noise scale for the robustness kind
  double delta = 0.05;
  int n_seeds = 10;
  std::uint64_t base_seed = 20240501;
  std::vector<Strategy> strategies{Strategy::Random, Strategy::Static, Strategy::Adaptive};
  RunConfig run_config;
  bool include_trajectory_in_raw = false;
  std::string out_csv = "aggregate.csv";
  std::string out_raw = "runs.jsonl";
  std::string out_svg = "plot.svg";
  std::string out_curves = "curves.csv";

  void validate() const;
  static ExperimentSpec from_json(const std::string& text);
  std::string to_json() const;
};

// Desk-scale specs finish in minutes; this variant restores the paper-scale
// close-second-arm angle and a correspondingly larger step budget. Expect
// hours per run.
ExperimentSpec full_scale_variant(ExperimentSpec spec);

struct AggregateRow {
  std::string strategy;
  std::string grid_axis;   // "d" or "K"
  double grid_value = 0.0;
  int n_seeds = 0;
  double mean_tau = 0.0;
  double stderr_tau = 0.0;
  double frac_correct = 0.0;
  std::vector<double> pull_fracs;  // mean per-arm pull fraction
};

struct RunRecord {
  Strategy strategy;
  std::string grid_axis;
  double grid_value = 0.0;
  int d = 0;
  int k = 0;
  int seed_ordinal = 0;
  std::uint64_t stream = 0;
  RunResult result;
};

struct ExperimentOutput {
  std::vector<AggregateRow> rows;
  std::vector<RunRecord> raw;
  std::string csv_path;
  std::string raw_path;
  std::string svg_path;     // empty when not emitted
  std::string curves_path;  // empty when not emitted
};

// Runs every grid point x strategy x seed, fanning replications across a
// worker pool (jobs <= 0 picks the hardware concurrency). Deterministic for a
// fixed spec: replication r of a grid point always uses RNG stream
// base_seed/child(grid_index * n_seeds + r) regardless of scheduling, and
// files are written in enumeration order.
ExperimentOutput run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                int jobs = 0);

// OLS slope of log(mean_tau) against log(grid_value) over the given rows.
// Requires at least 3 distinct grid values on the named axis.
double fit_scaling_exponent(const std::vector<AggregateRow>& rows, const std::string& axis);

// Standalone log-log SVG line chart, one polyline per strategy with stderr
// error bars. Deterministic bytes for identical inputs.
void emit_svg(const std::vector<AggregateRow>& rows, const std::string& axis,
              const std::string& path);

// Shortest round-trip decimal form of x (std::to_chars); used for every float
// written to CSV/JSONL/SVG so outputs are byte-stable.
std::string format_double(double x);

}  // namespace mnl
