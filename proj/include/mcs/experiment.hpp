#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mcs/config.hpp"
#include "mcs/metrics.hpp"

namespace mcs {

// Converged-window readings of one run, plus what the acceptance checks
// need beyond them.
struct RunStats {
  int run = 0;
  double social_welfare = 0.0;  // means over the last `window` steps
  double completion_ratio = 0.0;
  double mu_utility_mean = 0.0;
  double energy = 0.0;
  std::vector<double> mcsp_utility;
  long collisions = 0;  // whole run
  long collisions_first_half = 0;
  long collisions_second_half = 0;
  std::vector<double> perception_error;  // per step, empty unless exposed
  std::vector<Contract> final_assignment;  // accepted contracts of the last step without exploration
};

using RowSink = std::function<void(const MetricRow&)>;

// One Monte Carlo run of `strategy`. Every strategy sees the same scenario
// for a given (seed, run).
RunStats simulate_run(const ExperimentConfig& cfg, const std::string& strategy, int run, const RowSink& sink = {});

// All runs of one strategy, fanned out over threads, results in run order.
// `csv` receives the rows in run order when non-null.
std::vector<RunStats> simulate_runs(const ExperimentConfig& cfg, const std::string& strategy, std::string* csv = nullptr);

struct StrategySummary {
  std::string strategy;
  MeanStd social_welfare, completion_ratio, mu_utility_mean, energy;
  std::vector<MeanStd> mcsp_utility;
  MeanStd collisions, collisions_first_half, collisions_second_half;
  MeanStd final_perception_error;  // NaN mean when not exposed
  double welfare_vs_copt = 0.0;    // NaN when copt was not run
  double completion_vs_copt = 0.0;
};

StrategySummary summarize(const std::string& strategy, const std::vector<RunStats>& runs);

struct ExperimentOutput {
  std::string label;  // "main", or the sweep point such as "K50"
  std::vector<StrategySummary> strategies;
  std::vector<std::string> csv_files;
};

// Runs every experiment in `cfg` (one, or one per sweep value), writing
// <out>/<label>_<strategy>.csv and <out>/summary.json. Files are written
// as <name>.partial and renamed once complete, so a failure leaves the
// unfinished ones flagged.
std::vector<ExperimentOutput> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace mcs
