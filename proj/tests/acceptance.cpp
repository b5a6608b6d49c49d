// End-to-end acceptance checks at desk scale. Prints one PASS/FAIL line per
// criterion and exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mcs/config.hpp"
#include "mcs/experiment.hpp"

using namespace mcs;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Welfare of a set of contracts summed in a canonical order, so equal sets
// give bit-identical totals.
double canonical_welfare(const GroundTruthView& truth, std::vector<Contract> y) {
  std::sort(y.begin(), y.end());
  return expected_welfare_of(truth, y);
}

std::vector<Contract> exhaustive_best(const Scenario& sc, const GroundTruthView& truth) {
  const auto slots = all_slots(sc);
  std::vector<char> used(slots.size(), 0);
  std::vector<Contract> cur, best;
  double best_w = 0.0;
  auto rec = [&](auto&& self, int k, double acc) -> void {
    if (k == sc.K) {
      if (acc > best_w) {
        best_w = acc;
        best = cur;
      }
      return;
    }
    self(self, k + 1, acc);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (used[s]) continue;
      used[s] = 1;
      cur.push_back({slots[s].mcsp, k, slots[s].type, 0});
      self(self, k + 1, acc + truth.expected_welfare(slots[s].mcsp, k, slots[s].type));
      cur.pop_back();
      used[s] = 0;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

void check_assignment_oracle() {
  const auto t0 = Clock::now();
  Rng rng(101);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = 1 + static_cast<int>(rng.index(6));
    const int cols = 1 + static_cast<int>(rng.index(6));
    WeightMatrix m(rows, cols);
    for (auto& w : m.w) w = rng.uniform(-1.0, 5.0);
    if (solve_max_weight_assignment(m).total_value != brute_force_assignment(m).total_value) ++mismatches;
  }
  const double secs = seconds_since(t0);
  report(1, "assignment oracle equivalence", mismatches == 0 && secs < 10,
         fmt("%d/1000 mismatches, %.2f s", mismatches, secs));
}

void check_copt_optimality() {
  const auto t0 = Clock::now();
  Rng rng(202);
  int mismatches = 0;
  for (int n = 0; n < 100; ++n) {
    ScenarioConfig cfg;
    cfg.mus = 2 + static_cast<int>(rng.index(5));  // 2..6
    cfg.types = 1 + static_cast<int>(rng.index(3));  // 1..3
    cfg.tasks_per_type_min = cfg.tasks_per_type_max = 1;  // at most 6 tasks over 2 MCSPs
    const auto sc = generate_scenario(cfg, rng.child(static_cast<std::uint64_t>(n)));
    const auto truth = GroundTruthView::build(sc);
    if (canonical_welfare(truth, copt_assign(sc, truth)) != canonical_welfare(truth, exhaustive_best(sc, truth)))
      ++mismatches;
  }
  const double secs = seconds_since(t0);
  report(2, "centralized optimum equals exhaustive search", mismatches == 0 && secs < 30,
         fmt("%d/100 mismatches, %.2f s", mismatches, secs));
}

struct DeskResults {
  ExperimentConfig cfg;
  std::map<std::string, std::vector<RunStats>> runs;
  std::map<std::string, StrategySummary> summary;
  std::map<std::string, double> seconds;
};

DeskResults run_desk() {
  DeskResults d;
  d.cfg = desk_profile();
  for (const auto& s : d.cfg.strategies) {
    const auto t0 = Clock::now();
    d.runs[s] = simulate_runs(d.cfg, s);
    d.seconds[s] = seconds_since(t0);
    d.summary[s] = summarize(s, d.runs[s]);
    std::fprintf(stderr, "  %-7s welfare %.3f completion %.4f collisions %.0f/%.0f  (%.0f s)\n", s.c_str(),
                 d.summary[s].social_welfare.mean, d.summary[s].completion_ratio.mean,
                 d.summary[s].collisions_first_half.mean, d.summary[s].collisions_second_half.mean, d.seconds[s]);
  }
  return d;
}

void check_stability(const DeskResults& d) {
  Rng rng(303);
  int unstable_mgs = 0;
  for (int n = 0; n < 50; ++n) {
    ScenarioConfig cfg;
    cfg.mus = 2 + static_cast<int>(rng.index(9));  // 2..10
    cfg.types = 1 + static_cast<int>(rng.index(4));
    cfg.tasks_per_type_min = 1;
    cfg.tasks_per_type_max = 2;
    const auto sc = generate_scenario(cfg, rng.child(static_cast<std::uint64_t>(n)));
    const auto truth = GroundTruthView::build(sc);
    if (!find_blocking_pairs(sc, truth, mgs_assign(sc, truth).assignment).empty()) ++unstable_mgs;
  }

  const auto& runs = d.runs.at("prism");
  const Rng root(d.cfg.seed);
  int stable = 0;
  std::size_t most_pairs = 0;
  for (const auto& r : runs) {
    const auto sc = scenario_for_run(d.cfg.scenario, root, r.run);
    const auto truth = GroundTruthView::build(sc);
    const auto pairs = find_blocking_pairs(sc, truth, r.final_assignment);
    if (pairs.empty()) ++stable;
    most_pairs = std::max(most_pairs, pairs.size());
  }
  const double share = static_cast<double>(stable) / static_cast<double>(runs.size());
  report(3, "stability", unstable_mgs == 0 && share >= 0.9,
         fmt("MGS unstable on %d/50 instances; PRISM final assignment stable in %d/%zu runs (need >= 90%%), "
             "worst run has %zu blocking contracts",
             unstable_mgs, stable, runs.size(), most_pairs));
}

void check_perception_monotone(const DeskResults& d) {
  int bad_runs = 0;
  long bad_steps = 0;
  double worst = 0.0;
  for (const auto& r : d.runs.at("prism")) {
    bool bad = false;
    for (std::size_t t = 1; t < r.perception_error.size(); ++t)
      if (r.perception_error[t] > r.perception_error[t - 1]) {
        bad = true;
        ++bad_steps;
        worst = std::max(worst, r.perception_error[t] - r.perception_error[t - 1]);
      }
    bad_runs += bad;
  }
  report(4, "perception error non-increasing", bad_runs == 0,
         fmt("%d runs with an increase, %ld increasing steps, largest increase %.3g", bad_runs, bad_steps, worst));
}

void check_perception_decay(const DeskResults& d) {
  std::vector<std::vector<double>> series;
  for (const auto& r : d.runs.at("prism")) series.push_back(r.perception_error);
  std::vector<double> mean;
  for (const auto& m : across_runs(series)) mean.push_back(m.mean);
  if (mean.size() < 2) {
    report(5, "perception error decay", false, "no perception series");
    return;
  }
  const auto fit = fit_exponential_decay(mean);
  const double ratio = mean.back() / mean.front();
  const bool ok = ratio < 0.1 && !fit.degenerate && fit.r2 >= 0.8 && d.seconds.at("prism") < 300;
  report(5, "perception error decay", ok,
         fmt("mean %.2f -> %.2f (%.1f%%), fit lambda %.4g floor %.3g R^2 %.3f, %.0f s", mean.front(), mean.back(),
             100 * ratio, fit.lambda, fit.floor, fit.r2, d.seconds.at("prism")));
}

void check_welfare_order(const DeskResults& d) {
  auto w = [&](const char* s) { return d.summary.at(s).social_welfare.mean; };
  const double copt = w("copt"), prism = w("prism"), pacmab = w("pacmab"), cmab = w("cmab"), random = w("random");
  const bool ok = copt >= prism && prism >= 0.95 * copt && pacmab >= 0.90 * copt && pacmab > cmab && cmab > random;
  double secs = 0;
  for (const auto& [s, t] : d.seconds) secs += t;
  report(6, "welfare ordering", ok && secs < 600,
         fmt("COPT %.3f, PRISM %.4f, PACMAB %.4f, CMAB %.4f, MGS %.4f, Random %.4f of COPT; all runs %.0f s", copt,
             prism / copt, pacmab / copt, cmab / copt, w("mgs") / copt, random / copt, secs));
}

void check_completion(const DeskResults& d) {
  const double pacmab = d.summary.at("pacmab").completion_ratio.mean;
  bool exact = true;
  for (const char* s : {"copt", "mgs"})
    for (const auto& r : d.runs.at(s)) exact = exact && r.completion_ratio == 1.0;
  report(7, "completion ratio", pacmab >= 0.95 && exact,
         fmt("PACMAB %.4f; COPT and MGS every run exactly 1: %s", pacmab, exact ? "yes" : "no"));
}

void check_collisions(const DeskResults& d) {
  long central = 0;
  for (const char* s : {"copt", "mgs"})
    for (const auto& r : d.runs.at(s)) central += r.collisions;
  const auto& p = d.summary.at("pacmab");
  const auto& r = d.summary.at("random");
  const double growth = r.collisions_second_half.mean / r.collisions_first_half.mean;
  const bool ok = central == 0 && p.collisions_second_half.mean < p.collisions_first_half.mean && growth >= 0.8 &&
                  growth <= 1.2;
  report(8, "collisions", ok,
         fmt("COPT+MGS total %ld; PACMAB halves %.1f then %.1f; Random second/first half %.3f", central,
             p.collisions_first_half.mean, p.collisions_second_half.mean, growth));
}

void check_copt_mu_utility(const DeskResults& d) {
  int bad = 0;
  const auto& runs = d.runs.at("copt");
  for (const auto& r : runs)
    if (!(r.mu_utility_mean < 0.0)) ++bad;
  report(9, "unpaid MUs lose under the centralized optimum", bad == 0,
         fmt("%d/%zu runs with non-negative mean MU utility (mean %.4f)", bad, runs.size(),
             d.summary.at("copt").mu_utility_mean.mean));
}

// Median wall time of fn() over reps.
double median_time(int reps, const std::function<void()>& fn) {
  std::vector<double> t;
  for (int n = 0; n < reps; ++n) {
    const auto t0 = Clock::now();
    fn();
    t.push_back(seconds_since(t0));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

void check_complexity() {
  // MCSP side: one PACMAB propose plus feedback on a warmed-up table.
  auto pacmab_step_time = [](int K) {
    ScenarioConfig cfg;
    cfg.mus = K;
    const Rng root(9);
    const auto sc = scenario_for_run(cfg, root, 0);
    const auto truth = GroundTruthView::build(sc);
    StrategyParams prm;
    prm.pacmab.ucb_c = 0.25;
    auto m = make_market("pacmab", sc, truth, prm);
    for (int t = 0; t < 200; ++t) run_step(sc, m, t, root, 0);
    auto& s = *m.mcsps[0];
    Rng rng(1);
    int t = 200;
    return median_time(41, [&] {
      for (int n = 0; n < 20; ++n) {
        const auto offers = s.propose(t++, rng);
        std::vector<OfferResponse> resp;
        for (const auto& o : offers) resp.push_back({o, {}, {}});
        s.feedback(resp);
      }
    });
  };
  const double t20 = pacmab_step_time(20), t40 = pacmab_step_time(40);

  auto mu_time = [](int n) {
    MuEstimator e(5, 0.0, 1.0);
    for (int z = 0; z < 5; ++z) e.cost_estimate[static_cast<std::size_t>(z)] = 0.1 * z;
    std::vector<Offer> offers;
    for (int o = 0; o < n; ++o) offers.push_back({o, 0, 0, o % 5, 0, 0.01 * o});
    Rng rng(2);
    volatile int sink = 0;
    return median_time(41, [&] {
      for (int r = 0; r < 2000; ++r) sink = sink + mu_decide(e, offers, rng).accepted;
    });
  };
  const double m64 = mu_time(64), m128 = mu_time(128);
  const double rk = t40 / t20, rm = m128 / m64;
  report(10, "complexity scaling", rk <= 3.0 && rm <= 2.5,
         fmt("PACMAB step K=20 %.3g s, K=40 %.3g s (x%.2f, need <= 3); MU decision 64 offers %.3g s, 128 offers "
             "%.3g s (x%.2f, need <= 2.5)",
             t20, t40, rk, m64, m128, rm));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_determinism(const std::string& sim) {
  const fs::path base = fs::temp_directory_path() / "mcs_acceptance_determinism";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string args = " --seed 17 --runs 3 --steps 300 scenario.mus=10 > /dev/null";
  int rc = 0;
  for (const char* dir : {"a", "b"})
    rc |= std::system(("\"" + sim + "\" --out \"" + (base / dir).string() + "\"" + args).c_str());
  int compared = 0, differing = 0;
  if (rc == 0)
    for (const auto& e : fs::directory_iterator(base / "a")) {
      if (e.path().extension() != ".csv") continue;
      ++compared;
      const auto other = base / "b" / e.path().filename();
      if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differing;
    }
  fs::remove_all(base);
  report(11, "determinism", rc == 0 && compared == 6 && differing == 0,
         fmt("simulator exit %d, %d CSV files compared, %d differ", rc, compared, differing));
}

}  // namespace

int main(int argc, char** argv) {
  std::string sim;
  for (int a = 1; a + 1 < argc; ++a)
    if (std::string(argv[a]) == "--sim") sim = argv[a + 1];

  check_assignment_oracle();
  check_copt_optimality();
  std::fprintf(stderr, "desk profile, 20 runs x 5000 steps per strategy\n");
  const auto desk = run_desk();
  check_stability(desk);
  check_perception_monotone(desk);
  check_perception_decay(desk);
  check_welfare_order(desk);
  check_completion(desk);
  check_collisions(desk);
  check_copt_mu_utility(desk);
  check_complexity();
  if (sim.empty())
    report(11, "determinism", false, "no --sim path given");
  else
    check_determinism(sim);

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
