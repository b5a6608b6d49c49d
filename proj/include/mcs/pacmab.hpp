#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mcs/scenario.hpp"
#include "mcs/strategy.hpp"

namespace mcs {

struct PacmabConfig {
  double ucb_c = 2.0;
  double win_threshold = 0.1;
  bool prune = true;  // false gives the perception-free CMAB baseline
};

// Per-MCSP bandit state over (k, z, p) arms.
struct ArmTable {
  int I = 0, K = 0, Z = 0, P = 0;
  std::vector<double> estimate;  // [k][z][p], mean realized utility over accepts
  std::vector<int> L;            // [k][z][p], accepts
  std::vector<int> pulls;        // [k][z][p], offers made
  std::vector<int> win;          // [k][z]
  std::vector<int> lost;         // [k][z]
  std::vector<int> rival_level;  // [j][k][z][p], observed rival winning levels on i's grid
  std::vector<int> rival_total;  // [k][z], summed over j
  std::vector<int> rival_hist;   // [k][z][p], summed over j
  long ucb_t = 0;

  ArmTable() = default;
  ArmTable(int mcsps, int mus, int types, int levels)
      : I(mcsps),
        K(mus),
        Z(types),
        P(levels),
        estimate(arms(), 0.0),
        L(arms(), 0),
        pulls(arms(), 0),
        win(pairs(), 0),
        lost(pairs(), 0),
        rival_level(static_cast<std::size_t>(mcsps) * arms(), 0),
        rival_total(pairs(), 0),
        rival_hist(arms(), 0) {}

  std::size_t arms() const { return static_cast<std::size_t>(K) * Z * P; }
  std::size_t pairs() const { return static_cast<std::size_t>(K) * Z; }
  std::size_t arm(int k, int z, int p) const { return (static_cast<std::size_t>(k) * Z + z) * P + p; }
  std::size_t pair(int k, int z) const { return static_cast<std::size_t>(k) * Z + z; }

  // Empirical probability that a rival's winning bid for (k, z) sits at
  // or below level p. 1 before any rival bid has been seen.
  double win_probability(int k, int z, int p) const {
    const int n = rival_total[pair(k, z)];
    if (n == 0) return 1.0;
    int below = 0;
    for (int q = 0; q <= p; ++q) below += rival_hist[arm(k, z, q)];
    return static_cast<double>(below) / n;
  }

  // Mean utility over the accepts, scaled by the (k, z) acceptance ratio.
  double acceptance_weighted(int k, int z, int p) const {
    const auto c = pair(k, z);
    const int n = win[c] + lost[c];
    return n == 0 ? estimate[arm(k, z, p)] : estimate[arm(k, z, p)] * win[c] / n;
  }
};

inline double ucb_score(double estimate, long L, long t, double c) {
  if (L <= 0) return std::numeric_limits<double>::infinity();
  const double lt = t > 1 ? std::log(static_cast<double>(t)) : 0.0;
  return estimate + c * std::sqrt(lt / static_cast<double>(L));
}

struct Arm {
  int k, z, p;
  double score;
};

// Candidate arms of MCSP i restricted to types with quota. Pruning drops
// levels the observed rival bids say are unlikely to win, and arms that
// were tried and whose acceptance-weighted utility is not positive.
inline std::vector<Arm> build_feasible_set(const ArmTable& tab, const Scenario& sc, int i, const PacmabConfig& cfg) {
  std::vector<Arm> out;
  for (int k = 0; k < tab.K; ++k)
    for (int z = 0; z < tab.Z; ++z) {
      if (sc.quota(i, z) == 0) continue;
      for (int p = 0; p < tab.P; ++p) {
        const auto a = tab.arm(k, z, p);
        const long n = tab.pulls[a];
        if (cfg.prune) {
          if (tab.L[a] > 0 && tab.acceptance_weighted(k, z, p) <= 0.0) continue;
          if (tab.win_probability(k, z, p) < cfg.win_threshold) continue;
        }
        // Mean reward per offer, rejections counting zero.
        const double mean = n > 0 ? tab.estimate[a] * tab.L[a] / static_cast<double>(n) : 0.0;
        out.push_back({k, z, p, ucb_score(mean, n, tab.ucb_t, cfg.ucb_c)});
      }
    }
  return out;
}

// Highest score first, at most one offer per MU, quotas respected.
inline std::vector<Offer> pacmab_select(std::vector<Arm> cand, const Scenario& sc, int i) {
  std::stable_sort(cand.begin(), cand.end(), [](const Arm& a, const Arm& b) { return a.score > b.score; });
  std::vector<int> remaining(static_cast<std::size_t>(sc.Z));
  std::vector<int> next_task(static_cast<std::size_t>(sc.Z), 0);
  for (int z = 0; z < sc.Z; ++z) {
    remaining[static_cast<std::size_t>(z)] = sc.quota(i, z);
    if (z > 0) next_task[static_cast<std::size_t>(z)] = next_task[static_cast<std::size_t>(z - 1)] + sc.quota(i, z - 1);
  }
  std::vector<char> taken(static_cast<std::size_t>(sc.K), 0);
  int left = sc.tasks(i);
  std::vector<Offer> out;
  for (const auto& a : cand) {
    if (left == 0) break;
    if (taken[static_cast<std::size_t>(a.k)] || remaining[static_cast<std::size_t>(a.z)] == 0) continue;
    taken[static_cast<std::size_t>(a.k)] = 1;
    --remaining[static_cast<std::size_t>(a.z)];
    --left;
    out.push_back({i, a.k, next_task[static_cast<std::size_t>(a.z)]++, a.z, a.p, sc.payment(i, a.z, a.p)});
  }
  return out;
}

inline void pacmab_update(ArmTable& tab, const Scenario& sc, int i, const OfferResponse& r) {
  const auto& o = r.offer;
  const auto a = tab.arm(o.mu, o.task_type, o.payment_level);
  const auto c = tab.pair(o.mu, o.task_type);
  ++tab.pulls[a];
  ++tab.ucb_t;
  if (r.feedback.decision == Decision::accept) {
    if (!r.outcome) throw ContractViolation("accepted offer without an execution outcome");
    ++tab.win[c];
    ++tab.L[a];
    tab.estimate[a] += (r.outcome->mcsp_utility - tab.estimate[a]) / tab.L[a];
    return;
  }
  ++tab.lost[c];
  if (r.feedback.reason == RejectReason::chose_competitor) {
    const int j = r.feedback.competitor;
    // Own level needed to match the rival's payment.
    int lvl = sc.level_above(i, o.task_type, r.feedback.competitor_payment - 1e-12);
    if (lvl < 0) lvl = tab.P - 1;
    ++tab.rival_level[static_cast<std::size_t>(j) * tab.arms() + a - o.payment_level + lvl];
    ++tab.rival_hist[tab.arm(o.mu, o.task_type, lvl)];
    ++tab.rival_total[c];
  }
}

class PacmabStrategy final : public McspStrategy {
 public:
  PacmabStrategy(const Scenario& sc, int i, PacmabConfig cfg)
      : sc_(sc), i_(i), cfg_(cfg), tab_(sc.I, sc.K, sc.Z, sc.P) {}

  std::vector<Offer> propose(int, Rng&) override {
    return pacmab_select(build_feasible_set(tab_, sc_, i_, cfg_), sc_, i_);
  }
  void feedback(const std::vector<OfferResponse>& responses) override {
    for (const auto& r : responses) pacmab_update(tab_, sc_, i_, r);
  }
  const ArmTable& table() const { return tab_; }

 private:
  const Scenario& sc_;
  int i_;
  PacmabConfig cfg_;
  ArmTable tab_;
};

}  // namespace mcs
