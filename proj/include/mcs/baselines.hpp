#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mcs/assignment.hpp"
#include "mcs/scenario.hpp"
#include "mcs/stability.hpp"
#include "mcs/strategy.hpp"

namespace mcs {

struct Slot {
  int mcsp;
  int task_id;
  int type;
};

inline std::vector<Slot> slots_of(const Scenario& sc, int i) {
  std::vector<Slot> out;
  const auto types = sc.task_types(i);
  for (std::size_t n = 0; n < types.size(); ++n) out.push_back({i, static_cast<int>(n), types[n]});
  return out;
}

inline std::vector<Slot> all_slots(const Scenario& sc) {
  std::vector<Slot> out;
  for (int i = 0; i < sc.I; ++i) {
    auto s = slots_of(sc, i);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

// Rows are MUs, columns are the given slots followed by one zero-weight
// "stay idle" column per MU.
template <typename WeightFn>
WeightMatrix optional_matrix(int mus, const std::vector<Slot>& slots, WeightFn&& weight) {
  const int cols = static_cast<int>(slots.size());
  WeightMatrix m(mus, cols + mus, 0.0);
  for (int k = 0; k < mus; ++k)
    for (int c = 0; c < cols; ++c) m.at(k, c) = weight(k, slots[static_cast<std::size_t>(c)]);
  return m;
}

// Global welfare-maximizing assignment with zero payments.
inline std::vector<Contract> copt_assign(const Scenario& sc, const GroundTruthView& truth) {
  const auto slots = all_slots(sc);
  const auto m = optional_matrix(sc.K, slots, [&](int k, const Slot& s) {
    return truth.expected_welfare(s.mcsp, k, s.type);
  });
  const auto res = solve_max_weight_assignment(m);
  std::vector<Contract> out;
  for (auto [k, c] : res.matching) {
    if (c >= static_cast<int>(slots.size())) continue;
    const auto& s = slots[static_cast<std::size_t>(c)];
    out.push_back({s.mcsp, k, s.type, 0});
  }
  return out;
}

inline double expected_welfare_of(const GroundTruthView& truth, const std::vector<Contract>& y) {
  double w = 0.0;
  for (const auto& c : y) w += truth.expected_welfare(c.mcsp, c.mu, c.task_type);
  return w;
}

struct MgsResult {
  std::vector<Contract> assignment;
  int rounds = 0;
};

// MCSP-proposing deferred acceptance over contracts. Each round every MCSP
// proposes its best set of not-yet-rejected contracts (one per MU, within
// quotas, positive expected utility); each MU keeps the offer with the
// highest payment minus true cost and rejects the rest. A rejected
// contract's MCSP moves that MU-type pair up one payment level.
inline MgsResult mgs_assign(const Scenario& sc, const GroundTruthView& truth) {
  const auto idx = [&](int i, int k, int z) { return (static_cast<std::size_t>(i) * sc.K + k) * sc.Z + z; };
  std::vector<int> level(static_cast<std::size_t>(sc.I) * sc.K * sc.Z, 0);
  const long guard = static_cast<long>(sc.I) * sc.K * sc.Z * sc.P + 1;
  std::vector<std::vector<Slot>> slots(static_cast<std::size_t>(sc.I));
  for (int i = 0; i < sc.I; ++i) slots[static_cast<std::size_t>(i)] = slots_of(sc, i);

  MgsResult res;
  for (long round = 0;; ++round) {
    if (round >= guard) throw ProtocolError("deferred acceptance did not terminate");
    std::vector<std::vector<Contract>> by_mu(static_cast<std::size_t>(sc.K));
    for (int i = 0; i < sc.I; ++i) {
      const auto& sl = slots[static_cast<std::size_t>(i)];
      const auto m = optional_matrix(sc.K, sl, [&](int k, const Slot& s) {
        const int p = level[idx(i, k, s.type)];
        if (p >= sc.P) return kForbidden;
        const double u = truth.expected_revenue(i, k, s.type) - sc.payment(i, s.type, p);
        return u > 0.0 ? u : kForbidden;
      });
      const auto choice = solve_max_weight_assignment(m);
      for (auto [k, c] : choice.matching) {
        if (c >= static_cast<int>(sl.size())) continue;
        const int z = sl[static_cast<std::size_t>(c)].type;
        by_mu[static_cast<std::size_t>(k)].push_back({i, k, z, level[idx(i, k, z)]});
      }
    }
    bool rejected = false;
    std::vector<Contract> held;
    for (int k = 0; k < sc.K; ++k) {
      const auto& props = by_mu[static_cast<std::size_t>(k)];
      int best = -1;
      double best_u = 0.0;
      for (std::size_t o = 0; o < props.size(); ++o) {
        const auto& c = props[o];
        const double u = sc.payment(c.mcsp, c.task_type, c.payment_level) - truth.expected_cost(k, c.mcsp, c.task_type);
        if (u < 0.0) continue;
        if (best < 0 || u > best_u) {
          best = static_cast<int>(o);
          best_u = u;
        }
      }
      for (std::size_t o = 0; o < props.size(); ++o) {
        if (static_cast<int>(o) == best) continue;
        const auto& c = props[o];
        ++level[idx(c.mcsp, k, c.task_type)];
        rejected = true;
      }
      if (best >= 0) held.push_back(props[static_cast<std::size_t>(best)]);
    }
    if (rejected) continue;
    // An MCSP that reshuffles its MUs across types can drop a contract an
    // MU was holding, so a contract rejected earlier may block the result.
    // Reopen those at the blocking level and keep going.
    const auto blocking = find_blocking_pairs(sc, truth, held);
    if (blocking.empty()) {
      res.assignment = std::move(held);
      res.rounds = static_cast<int>(round) + 1;
      return res;
    }
    for (const auto& b : blocking) {
      int& lvl = level[idx(b.contract.mcsp, b.contract.mu, b.contract.task_type)];
      lvl = std::min(lvl, b.contract.payment_level);
    }
  }
}

// Replays a precomputed joint assignment every step.
class PlanStrategy final : public McspStrategy {
 public:
  PlanStrategy(const Scenario& sc, int i, const std::vector<Contract>& plan) {
    auto types = sc.task_types(i);
    std::vector<char> used(types.size(), 0);
    for (const auto& c : plan) {
      if (c.mcsp != i) continue;
      int task = -1;
      for (std::size_t n = 0; n < types.size(); ++n)
        if (!used[n] && types[n] == c.task_type) {
          task = static_cast<int>(n);
          used[n] = 1;
          break;
        }
      if (task < 0) throw ProtocolError("plan exceeds quota");
      offers_.push_back({i, c.mu, task, c.task_type, c.payment_level, sc.payment(i, c.task_type, c.payment_level)});
    }
  }
  std::vector<Offer> propose(int, Rng&) override { return offers_; }
  void feedback(const std::vector<OfferResponse>&) override {}

 private:
  std::vector<Offer> offers_;
};

inline std::vector<Offer> random_propose(const Scenario& sc, int i, Rng& rng) {
  std::vector<int> remaining(static_cast<std::size_t>(sc.Z));
  for (int z = 0; z < sc.Z; ++z) remaining[static_cast<std::size_t>(z)] = sc.quota(i, z);
  std::vector<int> next_task(static_cast<std::size_t>(sc.Z), 0);
  for (int z = 1; z < sc.Z; ++z)
    next_task[static_cast<std::size_t>(z)] = next_task[static_cast<std::size_t>(z - 1)] + sc.quota(i, z - 1);
  std::vector<int> order(static_cast<std::size_t>(sc.K));
  for (int k = 0; k < sc.K; ++k) order[static_cast<std::size_t>(k)] = k;
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Offer> out;
  std::vector<int> avail;
  for (int k : order) {
    avail.clear();
    for (int z = 0; z < sc.Z; ++z)
      if (remaining[static_cast<std::size_t>(z)] > 0) avail.push_back(z);
    if (avail.empty()) break;
    const int z = avail[rng.index(avail.size())];
    const int p = static_cast<int>(rng.index(static_cast<std::size_t>(sc.P)));
    --remaining[static_cast<std::size_t>(z)];
    out.push_back({i, k, next_task[static_cast<std::size_t>(z)]++, z, p, sc.payment(i, z, p)});
  }
  return out;
}

class RandomStrategy final : public McspStrategy {
 public:
  RandomStrategy(const Scenario& sc, int i) : sc_(sc), i_(i) {}
  std::vector<Offer> propose(int, Rng& rng) override { return random_propose(sc_, i_, rng); }
  void feedback(const std::vector<OfferResponse>&) override {}

 private:
  const Scenario& sc_;
  int i_;
};

}  // namespace mcs
