#pragma once

#include <vector>

#include "mcs/domain.hpp"
#include "mcs/scenario.hpp"
#include "mcs/strategy.hpp"

namespace mcs {

struct MuEstimator {
  std::vector<double> cost_estimate;  // [z], running mean of realized effort cost
  std::vector<int> pulls;             // [z]
  double epsilon = 1.0;
  double epsilon_decay = 0.999;

  MuEstimator() = default;
  MuEstimator(int types, double eps, double decay)
      : cost_estimate(static_cast<std::size_t>(types), 0.0),
        pulls(static_cast<std::size_t>(types), 0),
        epsilon(eps),
        epsilon_decay(decay) {}
};

// Accept the offer with the largest payment minus cost (ties: lowest MCSP
// index). Offers below zero are refused with negative_utility; the rest
// learn who won.
template <typename CostFn>
MuDecision exploit_decision(const std::vector<Offer>& offers, CostFn&& cost) {
  MuDecision d;
  d.feedback.resize(offers.size());
  std::vector<double> u(offers.size());
  for (std::size_t o = 0; o < offers.size(); ++o) {
    u[o] = mu_offer_utility(offers[o].payment, cost(offers[o]));
    if (u[o] < 0.0) continue;
    if (d.accepted < 0 || u[o] > u[static_cast<std::size_t>(d.accepted)] ||
        (u[o] == u[static_cast<std::size_t>(d.accepted)] && offers[o].mcsp < offers[static_cast<std::size_t>(d.accepted)].mcsp))
      d.accepted = static_cast<int>(o);
  }
  for (std::size_t o = 0; o < offers.size(); ++o) {
    auto& fb = d.feedback[o];
    if (static_cast<int>(o) == d.accepted) {
      fb.decision = Decision::accept;
      continue;
    }
    fb.decision = Decision::reject;
    if (u[o] < 0.0 || d.accepted < 0) {
      fb.reason = RejectReason::negative_utility;
    } else {
      const auto& win = offers[static_cast<std::size_t>(d.accepted)];
      fb.reason = RejectReason::chose_competitor;
      fb.competitor = win.mcsp;
      fb.competitor_payment = win.payment;
      fb.competitor_type = win.task_type;
    }
  }
  return d;
}

inline MuDecision accept_index(const std::vector<Offer>& offers, int idx) {
  MuDecision d;
  d.accepted = idx;
  d.feedback.resize(offers.size());
  const auto& win = offers[static_cast<std::size_t>(idx)];
  for (std::size_t o = 0; o < offers.size(); ++o) {
    auto& fb = d.feedback[o];
    if (static_cast<int>(o) == idx) {
      fb.decision = Decision::accept;
    } else {
      fb.decision = Decision::reject;
      fb.reason = RejectReason::chose_competitor;
      fb.competitor = win.mcsp;
      fb.competitor_payment = win.payment;
      fb.competitor_type = win.task_type;
    }
  }
  return d;
}

inline MuDecision mu_decide(const MuEstimator& est, const std::vector<Offer>& offers, Rng& rng) {
  if (offers.empty()) return {};
  if (rng.uniform() < est.epsilon) return accept_index(offers, static_cast<int>(rng.index(offers.size())));
  return exploit_decision(offers, [&](const Offer& o) { return est.cost_estimate[static_cast<std::size_t>(o.task_type)]; });
}

// Once per step, whether or not the MU was offered anything.
inline void mu_tick(MuEstimator& est) { est.epsilon *= est.epsilon_decay; }

inline void mu_update(MuEstimator& est, int z, double realized_cost) {
  auto& m = est.pulls[static_cast<std::size_t>(z)];
  auto& c = est.cost_estimate[static_cast<std::size_t>(z)];
  ++m;
  c += (realized_cost - c) / m;
}

inline MuDecision mu_oracle_decide(const GroundTruthView& truth, int k, const std::vector<Offer>& offers) {
  if (offers.empty()) return {};
  return exploit_decision(offers, [&](const Offer& o) { return truth.expected_cost(k, o.mcsp, o.task_type); });
}

class LearningMus final : public MuSide {
 public:
  LearningMus(int mus, int types, double epsilon, double decay)
      : est_(static_cast<std::size_t>(mus), MuEstimator(types, epsilon, decay)) {}
  MuDecision decide(int k, const std::vector<Offer>& offers, Rng& rng) override {
    return mu_decide(est_[static_cast<std::size_t>(k)], offers, rng);
  }
  void completed(int k, int z, double realized_cost) override {
    mu_update(est_[static_cast<std::size_t>(k)], z, realized_cost);
  }
  void end_step() override {
    for (auto& e : est_) mu_tick(e);
  }
  const MuEstimator& estimator(int k) const { return est_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<MuEstimator> est_;
};

class OracleMus final : public MuSide {
 public:
  explicit OracleMus(const GroundTruthView& truth) : truth_(truth) {}
  MuDecision decide(int k, const std::vector<Offer>& offers, Rng&) override {
    return mu_oracle_decide(truth_, k, offers);
  }

 private:
  const GroundTruthView& truth_;
};

// Executes whatever it is assigned; used with the welfare-optimal
// centralized baseline, which pays nothing.
class CompliantMus final : public MuSide {
 public:
  MuDecision decide(int, const std::vector<Offer>& offers, Rng&) override {
    if (offers.empty()) return {};
    if (offers.size() > 1) throw ProtocolError("compliant MU received competing offers");
    return accept_index(offers, 0);
  }
};

}  // namespace mcs
