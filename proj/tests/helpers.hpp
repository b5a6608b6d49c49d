#pragma once

#include <functional>
#include <vector>

#include "mcs/scenario.hpp"

namespace mcs::test {

// Hand-sized scenario: every MCSP has `quota` tasks of each type, base
// payment w and grid [0, 2w] over P levels; MUs are identical and the
// noise is off.
inline Scenario tiny_scenario(int I, int K, int Z, int P, int quota, double w = 1.0) {
  Scenario sc;
  sc.I = I;
  sc.K = K;
  sc.Z = Z;
  sc.P = P;
  sc.noise = {0.0, 0.0};
  for (int z = 0; z < Z; ++z) {
    TaskTypeSpec t;
    t.z = z;
    t.data_bits = 50e6;
    t.complexity = 250;
    t.result_bits = 10e6;
    for (int i = 0; i < I; ++i) {
      t.base_payment.push_back(w);
      t.quota.push_back(quota);
      t.payment_grid.push_back(make_payment_grid(w, P));
    }
    sc.types.push_back(t);
  }
  for (int k = 0; k < K; ++k) {
    MuProfile m;
    m.k = k;
    m.f_local = 1e9;
    m.p_sense = 0.5;
    m.p_comp = 1.0;
    m.p_comm = 0.2;
    m.alpha = 0.01;
    m.beta = 0.004;
    m.mean_sense_time.assign(static_cast<std::size_t>(Z), 0.1);
    m.mean_comm_time.assign(static_cast<std::size_t>(I), std::vector<double>(static_cast<std::size_t>(Z), 2.0));
    m.quality_mean.assign(static_cast<std::size_t>(I), std::vector<double>(static_cast<std::size_t>(Z), 0.5));
    sc.mus.push_back(m);
  }
  return sc;
}

// Ground truth with explicit expected revenue (i, k, z) and cost (k, i, z).
inline GroundTruthView make_truth(const Scenario& sc, const std::function<double(int, int, int)>& revenue,
                                  const std::function<double(int, int, int)>& cost) {
  GroundTruthView g;
  g.I = sc.I;
  g.K = sc.K;
  g.Z = sc.Z;
  g.revenue.resize(static_cast<std::size_t>(sc.I) * sc.K * sc.Z);
  g.cost.resize(g.revenue.size());
  for (int i = 0; i < sc.I; ++i)
    for (int k = 0; k < sc.K; ++k)
      for (int z = 0; z < sc.Z; ++z) {
        g.revenue[(static_cast<std::size_t>(i) * sc.K + k) * sc.Z + z] = revenue(i, k, z);
        g.cost[(static_cast<std::size_t>(k) * sc.I + i) * sc.Z + z] = cost(k, i, z);
      }
  return g;
}

}  // namespace mcs::test
