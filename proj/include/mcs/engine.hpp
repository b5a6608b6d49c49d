#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mcs/baselines.hpp"
#include "mcs/mu_policy.hpp"
#include "mcs/pacmab.hpp"
#include "mcs/prism.hpp"
#include "mcs/scenario.hpp"
#include "mcs/stability.hpp"
#include "mcs/strategy.hpp"

namespace mcs {

struct StepRecord {
  int t = 0;
  std::vector<int> offers;  // per MCSP
  int collisions = 0;       // rejections with reason chose_competitor
  int negative_rejections = 0;
  int completed = 0;
  int available = 0;
  std::vector<double> mcsp_utility;  // per MCSP
  std::vector<double> mu_utility;    // per MU, 0 when idle
  double energy = 0.0;
  double payments = 0.0;
  double revenue = 0.0;
  double effort_cost = 0.0;
  double perception_error = std::numeric_limits<double>::quiet_NaN();  // mean over MCSPs exposing one
  bool explored = false;
  std::vector<Contract> accepted;

  int total_offers() const {
    int n = 0;
    for (int o : offers) n += o;
    return n;
  }
};

struct StrategyParams {
  double prism_epsilon = 1.0;
  double prism_decay = 0.999;
  double mu_epsilon = 1.0;
  double mu_decay = 0.999;
  PacmabConfig pacmab;
};

inline const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{"copt", "mgs", "prism", "pacmab", "cmab", "random"};
  return names;
}

// One MCSP strategy per platform plus the MU side they face.
struct Market {
  std::vector<std::unique_ptr<McspStrategy>> mcsps;
  std::unique_ptr<MuSide> mus;
};

inline Market make_market(const std::string& name, const Scenario& sc, const GroundTruthView& truth,
                          const StrategyParams& prm) {
  Market m;
  auto learning = [&] { return std::make_unique<LearningMus>(sc.K, sc.Z, prm.mu_epsilon, prm.mu_decay); };
  if (name == "copt" || name == "mgs") {
    const auto plan = name == "copt" ? copt_assign(sc, truth) : mgs_assign(sc, truth).assignment;
    for (int i = 0; i < sc.I; ++i) m.mcsps.push_back(std::make_unique<PlanStrategy>(sc, i, plan));
    if (name == "copt")
      m.mus = std::make_unique<CompliantMus>();
    else
      m.mus = std::make_unique<OracleMus>(truth);
  } else if (name == "prism") {
    for (int i = 0; i < sc.I; ++i)
      m.mcsps.push_back(std::make_unique<PrismStrategy>(sc, truth, i, prm.prism_epsilon, prm.prism_decay));
    m.mus = std::make_unique<OracleMus>(truth);
  } else if (name == "pacmab" || name == "cmab") {
    auto cfg = prm.pacmab;
    cfg.prune = name == "pacmab";
    for (int i = 0; i < sc.I; ++i) m.mcsps.push_back(std::make_unique<PacmabStrategy>(sc, i, cfg));
    m.mus = learning();
  } else if (name == "random") {
    for (int i = 0; i < sc.I; ++i) m.mcsps.push_back(std::make_unique<RandomStrategy>(sc, i));
    m.mus = learning();
  } else {
    throw std::invalid_argument("unknown strategy: " + name);
  }
  return m;
}

namespace detail {

inline void check_offers(const Scenario& sc, int i, const std::vector<Offer>& offers, int t) {
  auto fail = [&](const std::string& what) {
    throw ProtocolError("step " + std::to_string(t) + ", MCSP " + std::to_string(i) + ": " + what);
  };
  const auto types = sc.task_types(i);
  std::vector<char> mu_used(static_cast<std::size_t>(sc.K), 0);
  std::vector<char> task_used(types.size(), 0);
  for (const auto& o : offers) {
    if (o.mcsp != i) fail("offer carries another MCSP's index");
    if (o.mu < 0 || o.mu >= sc.K) fail("unknown MU " + std::to_string(o.mu));
    if (o.task_id < 0 || o.task_id >= static_cast<int>(types.size())) fail("unknown task " + std::to_string(o.task_id));
    if (types[static_cast<std::size_t>(o.task_id)] != o.task_type) fail("task type mismatch");
    if (o.payment_level < 0 || o.payment_level >= sc.P) fail("payment level out of range");
    if (o.payment != sc.payment(i, o.task_type, o.payment_level)) fail("payment off the grid");
    if (mu_used[static_cast<std::size_t>(o.mu)]++) fail("duplicate offer to MU " + std::to_string(o.mu));
    if (task_used[static_cast<std::size_t>(o.task_id)]++) fail("task offered twice (quota exceeded)");
  }
}

inline void check_decision(const std::vector<Offer>& offers, const MuDecision& d, int k, int t) {
  auto fail = [&](const std::string& what) {
    throw ProtocolError("step " + std::to_string(t) + ", MU " + std::to_string(k) + ": " + what);
  };
  if (d.feedback.size() != offers.size()) fail("feedback count differs from offer count");
  if (d.accepted < -1 || d.accepted >= static_cast<int>(offers.size())) fail("accepted index out of range");
  for (std::size_t o = 0; o < offers.size(); ++o) {
    const auto& fb = d.feedback[o];
    if ((static_cast<int>(o) == d.accepted) != fb.accepted()) fail("decision flags disagree");
    if (fb.reason == RejectReason::chose_competitor) {
      if (d.accepted < 0) fail("competitor reported but nothing accepted");
      const auto& win = offers[static_cast<std::size_t>(d.accepted)];
      if (fb.competitor != win.mcsp || fb.competitor_payment != win.payment || fb.competitor_type != win.task_type)
        fail("untruthful competitor report");
    }
  }
}

}  // namespace detail

// Runs one step: offers, MU responses, execution, feedback.
inline StepRecord run_step(const Scenario& sc, Market& m, int t, const Rng& root, int run) {
  StepRecord rec;
  rec.t = t;
  rec.offers.assign(static_cast<std::size_t>(sc.I), 0);
  rec.mcsp_utility.assign(static_cast<std::size_t>(sc.I), 0.0);
  rec.mu_utility.assign(static_cast<std::size_t>(sc.K), 0.0);
  rec.available = sc.total_tasks();

  const Rng step = root.child(tag(StreamTag::step), static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(t));
  std::vector<std::vector<Offer>> emitted(static_cast<std::size_t>(sc.I));
  std::vector<std::vector<std::pair<int, int>>> by_mu(static_cast<std::size_t>(sc.K));  // (mcsp, offer index)
  for (int i = 0; i < sc.I; ++i) {
    Rng r = step.child(tag(StreamTag::mcsp), static_cast<std::uint64_t>(i));
    auto& offers = emitted[static_cast<std::size_t>(i)];
    offers = m.mcsps[static_cast<std::size_t>(i)]->propose(t, r);
    detail::check_offers(sc, i, offers, t);
    rec.offers[static_cast<std::size_t>(i)] = static_cast<int>(offers.size());
    rec.explored = rec.explored || m.mcsps[static_cast<std::size_t>(i)]->exploring();
    for (std::size_t o = 0; o < offers.size(); ++o)
      by_mu[static_cast<std::size_t>(offers[o].mu)].emplace_back(i, static_cast<int>(o));
  }

  std::vector<std::vector<OfferResponse>> responses(static_cast<std::size_t>(sc.I));
  for (int i = 0; i < sc.I; ++i)
    for (const auto& o : emitted[static_cast<std::size_t>(i)]) responses[static_cast<std::size_t>(i)].push_back({o, {}, {}});

  std::vector<Offer> received;
  for (int k = 0; k < sc.K; ++k) {
    const auto& refs = by_mu[static_cast<std::size_t>(k)];
    if (refs.empty()) continue;
    received.clear();
    for (auto [i, o] : refs) received.push_back(emitted[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)]);
    Rng r = step.child(tag(StreamTag::mu), static_cast<std::uint64_t>(k));
    const auto d = m.mus->decide(k, received, r);
    detail::check_decision(received, d, k, t);
    for (std::size_t n = 0; n < refs.size(); ++n) {
      auto [i, o] = refs[n];
      auto& resp = responses[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
      resp.feedback = d.feedback[n];
      if (resp.feedback.reason == RejectReason::chose_competitor) ++rec.collisions;
      if (resp.feedback.reason == RejectReason::negative_utility) ++rec.negative_rejections;
    }
    if (d.accepted < 0) continue;
    auto [i, o] = refs[static_cast<std::size_t>(d.accepted)];
    auto& resp = responses[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
    const auto& off = resp.offer;
    Rng ex = root.child(tag(StreamTag::execution), static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(t),
                        static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i),
                        static_cast<std::uint64_t>(off.task_type));
    auto out = sample_execution(sc.mus[static_cast<std::size_t>(k)], sc.types[static_cast<std::size_t>(off.task_type)], i,
                                sc.noise, ex);
    settle(out, sc.base_payment(i, off.task_type), off.payment);
    m.mus->completed(k, off.task_type, out.effort_cost);

    ++rec.completed;
    rec.mcsp_utility[static_cast<std::size_t>(i)] += out.mcsp_utility;
    rec.mu_utility[static_cast<std::size_t>(k)] += out.mu_utility;
    rec.energy += out.total_energy();
    rec.payments += out.payment;
    rec.revenue += out.realized_revenue;
    rec.effort_cost += out.effort_cost;
    rec.accepted.push_back({i, k, off.task_type, off.payment_level});
    resp.outcome = out;
  }

  m.mus->end_step();

  double err = 0.0;
  int nerr = 0;
  for (int i = 0; i < sc.I; ++i) {
    auto& s = *m.mcsps[static_cast<std::size_t>(i)];
    s.feedback(responses[static_cast<std::size_t>(i)]);
    if (auto e = s.perception_error()) {
      err += *e;
      ++nerr;
    }
  }
  if (nerr > 0) rec.perception_error = err / nerr;
  return rec;
}

// Called with each record as it is produced; lets long runs avoid keeping
// the whole series.
template <typename Sink>
void run_episode(const Scenario& sc, Market& m, int steps, const Rng& root, int run, Sink&& sink) {
  for (int t = 0; t < steps; ++t) sink(run_step(sc, m, t, root, run));
}

inline std::vector<StepRecord> run_episode(const Scenario& sc, Market& m, int steps, const Rng& root, int run) {
  std::vector<StepRecord> out;
  out.reserve(static_cast<std::size_t>(std::max(steps, 0)));
  run_episode(sc, m, steps, root, run, [&](StepRecord r) { out.push_back(std::move(r)); });
  return out;
}

// Scenario for Monte Carlo run `run`; every strategy sees the same one.
inline Scenario scenario_for_run(const ScenarioConfig& cfg, const Rng& root, int run) {
  return generate_scenario(cfg, root.child(tag(StreamTag::scenario), static_cast<std::uint64_t>(run)));
}

}  // namespace mcs
