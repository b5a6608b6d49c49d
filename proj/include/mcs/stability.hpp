#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mcs/domain.hpp"
#include "mcs/scenario.hpp"

namespace mcs {

// An MCSP-MU pair and a contract (i, k, z, p) outside the assignment that
// both strictly prefer under true expected utilities.
struct BlockingPair {
  Contract contract;
  double mcsp_gain = 0.0;
  double mu_gain = 0.0;
};

inline double contract_mcsp_utility(const Scenario& sc, const GroundTruthView& truth, const Contract& c) {
  return truth.expected_revenue(c.mcsp, c.mu, c.task_type) - sc.payment(c.mcsp, c.task_type, c.payment_level);
}

inline double contract_mu_utility(const Scenario& sc, const GroundTruthView& truth, const Contract& c) {
  return sc.payment(c.mcsp, c.task_type, c.payment_level) - truth.expected_cost(c.mu, c.mcsp, c.task_type);
}

inline void validate_assignment(const Scenario& sc, const std::vector<Contract>& y) {
  std::vector<int> seen(static_cast<std::size_t>(sc.K), 0);
  std::vector<int> used(static_cast<std::size_t>(sc.I * sc.Z), 0);
  for (const auto& c : y) {
    if (c.mcsp < 0 || c.mcsp >= sc.I || c.mu < 0 || c.mu >= sc.K || c.task_type < 0 || c.task_type >= sc.Z ||
        c.payment_level < 0 || c.payment_level >= sc.P)
      throw ProtocolError("assignment references an unknown index");
    if (++seen[static_cast<std::size_t>(c.mu)] > 1)
      throw ProtocolError("MU " + std::to_string(c.mu) + " holds more than one contract");
    if (++used[static_cast<std::size_t>(c.mcsp * sc.Z + c.task_type)] > sc.quota(c.mcsp, c.task_type))
      throw ProtocolError("quota exceeded for MCSP " + std::to_string(c.mcsp) + " type " + std::to_string(c.task_type));
  }
}

// Every blocking contract. An MCSP accepting the contract may release MU
// k's current contract with it and, if the type quota is full, its least
// valuable contract of that type. Empty result means the assignment is stable.
inline std::vector<BlockingPair> find_blocking_pairs(const Scenario& sc, const GroundTruthView& truth,
                                                     const std::vector<Contract>& y, double tol = 1e-9) {
  validate_assignment(sc, y);
  std::vector<const Contract*> held(static_cast<std::size_t>(sc.K), nullptr);
  for (const auto& c : y) held[static_cast<std::size_t>(c.mu)] = &c;

  std::vector<BlockingPair> out;
  for (int i = 0; i < sc.I; ++i) {
    for (int k = 0; k < sc.K; ++k) {
      const Contract* cur = held[static_cast<std::size_t>(k)];
      const double mu_now = cur ? contract_mu_utility(sc, truth, *cur) : 0.0;
      const bool with_i = cur && cur->mcsp == i;
      const double released = with_i ? contract_mcsp_utility(sc, truth, *cur) : 0.0;
      for (int z = 0; z < sc.Z; ++z) {
        if (sc.quota(i, z) == 0) continue;
        int count = 0;
        double weakest = std::numeric_limits<double>::infinity();
        for (const auto& c : y) {
          if (c.mcsp != i || c.task_type != z || c.mu == k) continue;
          ++count;
          weakest = std::min(weakest, contract_mcsp_utility(sc, truth, c));
        }
        const double displaced = count < sc.quota(i, z) ? 0.0 : weakest;
        for (int p = 0; p < sc.P; ++p) {
          const Contract x{i, k, z, p};
          if (cur && *cur == x) continue;
          const double mu_gain = contract_mu_utility(sc, truth, x) - mu_now;
          if (mu_gain <= tol) continue;
          const double mcsp_gain = contract_mcsp_utility(sc, truth, x) - released - displaced;
          if (mcsp_gain <= tol) continue;
          out.push_back({x, mcsp_gain, mu_gain});
        }
      }
    }
  }
  return out;
}

}  // namespace mcs
