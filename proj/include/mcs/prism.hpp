#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mcs/assignment.hpp"
#include "mcs/baselines.hpp"
#include "mcs/scenario.hpp"
#include "mcs/strategy.hpp"

namespace mcs {

// MCSP i's view of the market.
struct PerceptionStore {
  int I = 0, K = 0, Z = 0;
  std::vector<double> theta_own;    // [k][z]
  std::vector<double> theta_other;  // [j][k][z], own slice unused
  std::vector<int> p_min;           // [k][z]
  double epsilon = 1.0;
  double epsilon_d = 0.999;

  PerceptionStore() = default;
  PerceptionStore(int mcsps, int mus, int types, double eps, double decay)
      : I(mcsps),
        K(mus),
        Z(types),
        theta_own(static_cast<std::size_t>(mus) * types, 0.0),
        theta_other(static_cast<std::size_t>(mcsps) * mus * types, 0.0),
        p_min(static_cast<std::size_t>(mus) * types, 0),
        epsilon(eps),
        epsilon_d(decay) {}

  double& own(int k, int z) { return theta_own[static_cast<std::size_t>(k) * Z + z]; }
  double own(int k, int z) const { return theta_own[static_cast<std::size_t>(k) * Z + z]; }
  double& other(int j, int k, int z) { return theta_other[(static_cast<std::size_t>(j) * K + k) * Z + z]; }
  double other(int j, int k, int z) const { return theta_other[(static_cast<std::size_t>(j) * K + k) * Z + z]; }
  int& floor_level(int k, int z) { return p_min[static_cast<std::size_t>(k) * Z + z]; }
  int floor_level(int k, int z) const { return p_min[static_cast<std::size_t>(k) * Z + z]; }

  // Own expected revenues taken from the ground truth.
  static PerceptionStore seeded(const Scenario& sc, const GroundTruthView& truth, int i, double eps, double decay) {
    PerceptionStore s(sc.I, sc.K, sc.Z, eps, decay);
    for (int k = 0; k < sc.K; ++k)
      for (int z = 0; z < sc.Z; ++z) s.own(k, z) = truth.expected_revenue(i, k, z);
    return s;
  }
};

inline double perception_error(const PerceptionStore& s, const GroundTruthView& truth, int i) {
  double e = 0.0;
  for (int j = 0; j < s.I; ++j) {
    if (j == i) continue;
    for (int k = 0; k < s.K; ++k)
      for (int z = 0; z < s.Z; ++z) e += std::abs(truth.expected_revenue(j, k, z) - s.other(j, k, z));
  }
  return e;
}

// Best total value the rivals of MCSP i could reach with the MUs in
// `pool`, valuing MU k on rival j's type-z slot at theta_other minus i's
// own estimate of what k needs to be paid.
inline double rival_market_value(const Scenario& sc, const PerceptionStore& s, int i, const std::vector<char>& pool) {
  std::vector<Slot> slots;
  for (int j = 0; j < sc.I; ++j) {
    if (j == i) continue;
    auto sl = slots_of(sc, j);
    slots.insert(slots.end(), sl.begin(), sl.end());
  }
  std::vector<int> rows;
  for (int k = 0; k < sc.K; ++k)
    if (pool[static_cast<std::size_t>(k)]) rows.push_back(k);
  if (rows.empty() || slots.empty()) return 0.0;
  const auto m = optional_matrix(static_cast<int>(rows.size()), slots, [&](int r, const Slot& sl) {
    const int k = rows[static_cast<std::size_t>(r)];
    return s.other(sl.mcsp, k, sl.type) - sc.payment(i, sl.type, s.floor_level(k, sl.type));
  });
  return solve_max_weight_assignment(m).total_value;
}

// What the rivals would give up, in perceived surplus, if MU k were not
// available to them on top of `pool`. This is the price exploitation
// outbids; removing a task instead of the MU prices the type, not the MU,
// and lets rivals keep MUs they value most.
inline double mu_shadow_price(const Scenario& sc, const PerceptionStore& s, int i, std::vector<char> pool, int k) {
  pool[static_cast<std::size_t>(k)] = 1;
  const double with_k = rival_market_value(sc, s, i, pool);
  pool[static_cast<std::size_t>(k)] = 0;
  const double without_k = rival_market_value(sc, s, i, pool);
  return std::max(0.0, with_k - without_k);
}

// Competitor j's perceived optimal value over the MUs in `pool` with its
// full task set, minus the same with one type-z task removed.
inline double shadow_price(const Scenario& sc, const PerceptionStore& s, int j, const std::vector<char>& pool,
                                      int z) {
  std::vector<int> rows;
  for (int k = 0; k < sc.K; ++k)
    if (pool[static_cast<std::size_t>(k)]) rows.push_back(k);
  const auto full = slots_of(sc, j);
  auto reduced = full;
  const auto it = std::find_if(reduced.begin(), reduced.end(), [&](const Slot& sl) { return sl.type == z; });
  if (rows.empty() || it == reduced.end()) return 0.0;
  reduced.erase(it);
  auto value = [&](const std::vector<Slot>& slots) {
    const auto m = optional_matrix(static_cast<int>(rows.size()), slots, [&](int r, const Slot& sl) {
      return s.other(j, rows[static_cast<std::size_t>(r)], sl.type);
    });
    return solve_max_weight_assignment(m).total_value;
  };
  return std::max(0.0, value(full) - value(reduced));
}

// Payment level that outbids a rival surplus of `sp` on top of the
// estimated cost, never below the learned floor. -1 if no level does.
inline int outbid_level(const Scenario& sc, const PerceptionStore& s, int i, int k, int z, double sp) {
  const int floor = s.floor_level(k, z);
  if (sp <= 0.0) return floor;
  const int above = sc.level_above(i, z, sc.payment(i, z, floor) + sp);
  return above < 0 ? -1 : std::max(floor, above);
}

class PrismStrategy final : public McspStrategy {
 public:
  PrismStrategy(const Scenario& sc, const GroundTruthView& truth, int i, double eps, double decay)
      : sc_(sc), truth_(truth), i_(i), store_(PerceptionStore::seeded(sc, truth, i, eps, decay)) {}

  std::vector<Offer> propose(int, Rng& rng) override {
    exploring_ = rng.uniform() < store_.epsilon;
    return exploring_ ? explore(rng) : exploit();
  }

  void feedback(const std::vector<OfferResponse>& responses) override {
    for (const auto& r : responses) {
      const int k = r.offer.mu;
      if (r.feedback.decision == Decision::accept) continue;
      if (r.feedback.reason == RejectReason::negative_utility) {
        int& p = store_.floor_level(k, r.offer.task_type);
        if (p < sc_.P - 1) {
          ++p;
          dirty_ = true;
        }
      } else if (r.feedback.reason == RejectReason::chose_competitor) {
        const int j = r.feedback.competitor;
        if (j < 0 || j >= sc_.I || j == i_ || r.feedback.competitor_type < 0 || r.feedback.competitor_type >= sc_.Z)
          throw ProtocolError("rejection names an unknown competitor");
        double& th = store_.other(r.feedback.competitor, k, r.feedback.competitor_type);
        if (r.feedback.competitor_payment > th) {
          th = r.feedback.competitor_payment;
          dirty_ = true;
        }
      }
    }
    store_.epsilon *= store_.epsilon_d;
  }

  std::optional<double> perception_error() const override { return mcs::perception_error(store_, truth_, i_); }
  bool exploring() const override { return exploring_; }
  const PerceptionStore& store() const { return store_; }
  PerceptionStore& store() { return store_; }

  // Exploitation offers for the current perceptions. The MUs are split
  // by a max-weight assignment over every platform's slots, own slots
  // valued at the grid value nearest theta_own. That is the number a rival
  // learns from i's exploration bids, so once perceptions settle all
  // platforms solve the same problem and their plans agree. Each MU i
  // keeps is paid enough to beat its shadow price, capped at theta_own.
  std::vector<Offer> exploit() {
    if (!dirty_) return cached_;
    dirty_ = false;
    cached_.clear();

    const std::vector<Slot> own = slots_of(sc_, i_);
    std::vector<Slot> slots = own;
    for (int j = 0; j < sc_.I; ++j) {
      if (j == i_) continue;
      auto sl = slots_of(sc_, j);
      slots.insert(slots.end(), sl.begin(), sl.end());
    }
    const auto m = optional_matrix(sc_.K, slots, [&](int k, const Slot& sl) {
      if (sl.mcsp != i_) return store_.other(sl.mcsp, k, sl.type);
      return sc_.payment(i_, sl.type, sc_.nearest_level(i_, sl.type, store_.own(k, sl.type)));
    });
    const auto plan = solve_max_weight_assignment(m);

    std::vector<char> pool(static_cast<std::size_t>(sc_.K), 1);
    std::vector<std::pair<int, int>> hired;  // (k, own slot)
    for (auto [k, c] : plan.matching)
      if (c < static_cast<int>(own.size())) {
        hired.emplace_back(k, c);
        pool[static_cast<std::size_t>(k)] = 0;
      }
    for (auto [k, c] : hired) {
      const auto& sl = own[static_cast<std::size_t>(c)];
      const int p = outbid_level(sc_, store_, i_, k, sl.type, mu_shadow_price(sc_, store_, i_, pool, k));
      if (p < 0 || sc_.payment(i_, sl.type, p) > store_.own(k, sl.type)) continue;
      cached_.push_back({i_, k, sl.task_id, sl.type, p, sc_.payment(i_, sl.type, p)});
    }
    return cached_;
  }

 private:
  std::vector<Offer> explore(Rng& rng) {
    std::vector<int> remaining(static_cast<std::size_t>(sc_.Z));
    std::vector<int> next_task(static_cast<std::size_t>(sc_.Z), 0);
    for (int z = 0; z < sc_.Z; ++z) {
      remaining[static_cast<std::size_t>(z)] = sc_.quota(i_, z);
      if (z > 0) next_task[static_cast<std::size_t>(z)] = next_task[static_cast<std::size_t>(z - 1)] + sc_.quota(i_, z - 1);
    }
    std::vector<int> order(static_cast<std::size_t>(sc_.K));
    for (int k = 0; k < sc_.K; ++k) order[static_cast<std::size_t>(k)] = k;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Offer> out;
    std::vector<int> avail;
    for (int k : order) {
      avail.clear();
      for (int z = 0; z < sc_.Z; ++z)
        if (remaining[static_cast<std::size_t>(z)] > 0) avail.push_back(z);
      if (avail.empty()) break;
      const int z = avail[rng.index(avail.size())];
      const int p = rng.bernoulli(0.5) ? store_.floor_level(k, z) : sc_.nearest_level(i_, z, store_.own(k, z));
      --remaining[static_cast<std::size_t>(z)];
      out.push_back({i_, k, next_task[static_cast<std::size_t>(z)]++, z, p, sc_.payment(i_, z, p)});
    }
    return out;
  }

  const Scenario& sc_;
  const GroundTruthView& truth_;
  int i_;
  PerceptionStore store_;
  bool exploring_ = false;
  bool dirty_ = true;
  std::vector<Offer> cached_;
};

}  // namespace mcs
