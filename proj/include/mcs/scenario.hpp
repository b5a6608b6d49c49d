#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcs/domain.hpp"
#include "mcs/rng.hpp"

namespace mcs {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Scenario parameters. Defaults are the desk profile; units follow the
// field names (Mbit, GHz, ms, W).
struct ScenarioConfig {
  int mcsps = 2;
  int mus = 20;
  int types = 5;
  int payment_levels = 20;
  int tasks_per_type_min = 2;
  int tasks_per_type_max = 2;
  Range base_payment{1.0, 2.0};

  Range data_mbit{50.0, 100.0};
  Range complexity{200.0, 300.0};
  Range result_mbit{10.0, 20.0};

  Range cpu_ghz{1.0, 2.0};
  Range rate_mbps{40.0, 80.0};
  Range sense_ms{60.0, 180.0};
  Range quality_mean{0.0, 1.0};
  double p_sense = 0.5;
  double p_comp = 1.0;
  double p_comm = 0.2;
  double alpha = 0.01;
  double beta = 0.004;

  NoiseModel noise;

  void validate() const {
    auto need = [](bool ok, const std::string& key, const std::string& what) {
      if (!ok) throw ConfigError(key + ": " + what);
    };
    auto range = [&](const Range& r, const std::string& key, bool positive) {
      need(r.lo <= r.hi, key, "min exceeds max");
      if (positive) need(r.lo > 0, key, "must be positive");
    };
    need(mcsps >= 1, "scenario.mcsps", "must be >= 1");
    need(mus >= 1, "scenario.mus", "must be >= 1");
    need(types >= 1, "scenario.types", "must be >= 1");
    need(payment_levels >= 2, "scenario.payment_levels", "must be >= 2");
    need(tasks_per_type_min >= 0 && tasks_per_type_min <= tasks_per_type_max, "scenario.tasks_per_type",
         "need 0 <= min <= max");
    range(base_payment, "scenario.base_payment", true);
    range(data_mbit, "task.data_mbit", true);
    range(complexity, "task.complexity", true);
    range(result_mbit, "task.result_mbit", true);
    need(result_mbit.hi < data_mbit.lo, "task.result_mbit", "results must be smaller than data");
    range(cpu_ghz, "mu.cpu_ghz", true);
    range(rate_mbps, "mu.rate_mbps", true);
    range(sense_ms, "mu.sense_ms", true);
    range(quality_mean, "mu.quality_mean", false);
    need(quality_mean.lo >= 0 && quality_mean.hi <= 1, "mu.quality_mean", "must lie in [0,1]");
    need(p_sense > 0 && p_comp > 0 && p_comm > 0, "mu.p_*", "powers must be positive");
    need(alpha > 0 && beta > 0, "mu.alpha/beta", "cost weights must be positive");
    need(noise.time_cv >= 0, "noise.time_cv", "must be >= 0");
    need(noise.quality_sd >= 0, "noise.quality_sd", "must be >= 0");
  }
};

struct Scenario {
  int I = 0, K = 0, Z = 0, P = 0;
  std::vector<TaskTypeSpec> types;
  std::vector<MuProfile> mus;
  NoiseModel noise;

  const std::vector<double>& grid(int i, int z) const {
    return types[static_cast<std::size_t>(z)].payment_grid[static_cast<std::size_t>(i)];
  }
  double payment(int i, int z, int p) const { return grid(i, z)[static_cast<std::size_t>(p)]; }
  double base_payment(int i, int z) const {
    return types[static_cast<std::size_t>(z)].base_payment[static_cast<std::size_t>(i)];
  }
  int quota(int i, int z) const { return types[static_cast<std::size_t>(z)].quota[static_cast<std::size_t>(i)]; }
  int tasks(int i) const {
    int n = 0;
    for (int z = 0; z < Z; ++z) n += quota(i, z);
    return n;
  }
  int total_tasks() const {
    int n = 0;
    for (int i = 0; i < I; ++i) n += tasks(i);
    return n;
  }
  // Task instance n of MCSP i -> type. Instances are grouped by type.
  std::vector<int> task_types(int i) const {
    std::vector<int> out;
    for (int z = 0; z < Z; ++z)
      for (int q = 0; q < quota(i, z); ++q) out.push_back(z);
    return out;
  }
  // Largest level whose value does not exceed x (0 if none).
  int level_at_most(int i, int z, double x) const {
    const auto& g = grid(i, z);
    int lvl = 0;
    for (int p = 0; p < P; ++p)
      if (g[static_cast<std::size_t>(p)] <= x) lvl = p;
    return lvl;
  }
  // Closest level to x; ties go to the lower one.
  int nearest_level(int i, int z, double x) const {
    const auto& g = grid(i, z);
    int best = 0;
    for (int p = 1; p < P; ++p)
      if (std::abs(g[static_cast<std::size_t>(p)] - x) < std::abs(g[static_cast<std::size_t>(best)] - x)) best = p;
    return best;
  }
  // Smallest level whose value is strictly greater than x, or -1.
  int level_above(int i, int z, double x) const {
    const auto& g = grid(i, z);
    for (int p = 0; p < P; ++p)
      if (g[static_cast<std::size_t>(p)] > x) return p;
    return -1;
  }

  void validate() const {
    for (const auto& t : types) t.validate();
    for (const auto& m : mus) m.validate();
  }
};

inline Scenario generate_scenario(const ScenarioConfig& cfg, Rng rng) {
  cfg.validate();
  Scenario sc;
  sc.I = cfg.mcsps;
  sc.K = cfg.mus;
  sc.Z = cfg.types;
  sc.P = cfg.payment_levels;
  sc.noise = cfg.noise;
  for (int z = 0; z < sc.Z; ++z) {
    TaskTypeSpec t;
    t.z = z;
    t.data_bits = rng.uniform(cfg.data_mbit.lo, cfg.data_mbit.hi) * 1e6;
    t.complexity = rng.uniform(cfg.complexity.lo, cfg.complexity.hi);
    t.result_bits = rng.uniform(cfg.result_mbit.lo, cfg.result_mbit.hi) * 1e6;
    for (int i = 0; i < sc.I; ++i) {
      const double w = rng.uniform(cfg.base_payment.lo, cfg.base_payment.hi);
      t.base_payment.push_back(w);
      t.quota.push_back(rng.integer(cfg.tasks_per_type_min, cfg.tasks_per_type_max));
      t.payment_grid.push_back(make_payment_grid(w, sc.P));
    }
    sc.types.push_back(std::move(t));
  }
  for (int k = 0; k < sc.K; ++k) {
    MuProfile m;
    m.k = k;
    m.f_local = rng.uniform(cfg.cpu_ghz.lo, cfg.cpu_ghz.hi) * 1e9;
    m.p_sense = cfg.p_sense;
    m.p_comp = cfg.p_comp;
    m.p_comm = cfg.p_comm;
    m.alpha = cfg.alpha;
    m.beta = cfg.beta;
    for (int z = 0; z < sc.Z; ++z) m.mean_sense_time.push_back(rng.uniform(cfg.sense_ms.lo, cfg.sense_ms.hi) * 1e-3);
    m.mean_comm_time.assign(static_cast<std::size_t>(sc.I), {});
    m.quality_mean.assign(static_cast<std::size_t>(sc.I), {});
    for (int i = 0; i < sc.I; ++i) {
      const double rate = rng.uniform(cfg.rate_mbps.lo, cfg.rate_mbps.hi) * 1e6;
      for (int z = 0; z < sc.Z; ++z) {
        m.mean_comm_time[static_cast<std::size_t>(i)].push_back(sc.types[static_cast<std::size_t>(z)].result_bits / rate);
        m.quality_mean[static_cast<std::size_t>(i)].push_back(rng.uniform(cfg.quality_mean.lo, cfg.quality_mean.hi));
      }
    }
    sc.mus.push_back(std::move(m));
  }
  sc.validate();
  return sc;
}

// Expected revenues and costs from the scenario latents. Only the
// complete-information strategies, oracle MUs and the analysis code read it.
struct GroundTruthView {
  int I = 0, K = 0, Z = 0;
  std::vector<double> revenue;  // [i][k][z]
  std::vector<double> cost;     // [k][i][z]

  double expected_revenue(int i, int k, int z) const {
    return revenue[(static_cast<std::size_t>(i) * K + k) * Z + z];
  }
  double expected_cost(int k, int i, int z) const { return cost[(static_cast<std::size_t>(k) * I + i) * Z + z]; }
  double expected_welfare(int i, int k, int z) const { return expected_revenue(i, k, z) - expected_cost(k, i, z); }

  static GroundTruthView build(const Scenario& sc) {
    GroundTruthView g;
    g.I = sc.I;
    g.K = sc.K;
    g.Z = sc.Z;
    g.revenue.resize(static_cast<std::size_t>(sc.I) * sc.K * sc.Z);
    g.cost.resize(static_cast<std::size_t>(sc.I) * sc.K * sc.Z);
    for (int i = 0; i < sc.I; ++i)
      for (int k = 0; k < sc.K; ++k)
        for (int z = 0; z < sc.Z; ++z) {
          const auto& mu = sc.mus[static_cast<std::size_t>(k)];
          const double q = expected_quality(mu.quality_mean[static_cast<std::size_t>(i)][static_cast<std::size_t>(z)],
                                            sc.noise.quality_sd);
          g.revenue[(static_cast<std::size_t>(i) * sc.K + k) * sc.Z + z] = (1.0 + q) * sc.base_payment(i, z);
          g.cost[(static_cast<std::size_t>(k) * sc.I + i) * sc.Z + z] =
              expected_effort_cost(mu, sc.types[static_cast<std::size_t>(z)], i);
        }
    return g;
  }
};

}  // namespace mcs
