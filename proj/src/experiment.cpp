#include "mcs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "mcs/report.hpp"

namespace mcs {

namespace fs = std::filesystem;
using nlohmann::json;

RunStats simulate_run(const ExperimentConfig& cfg, const std::string& strategy, int run, const RowSink& sink) {
  const Rng root(cfg.seed);
  const Scenario sc = scenario_for_run(cfg.scenario, root, run);
  const GroundTruthView truth = GroundTruthView::build(sc);
  Market market = make_market(strategy, sc, truth, cfg.params);

  RunStats st;
  st.run = run;
  const auto steps = static_cast<std::size_t>(cfg.steps);
  std::vector<double> welfare, completion, mu_mean, energy;
  std::vector<std::vector<double>> mcsp(static_cast<std::size_t>(sc.I));
  for (auto* v : {&welfare, &completion, &mu_mean, &energy}) v->reserve(steps);
  MetricAccumulator acc;

  run_episode(sc, market, cfg.steps, root, run, [&](const StepRecord& r) {
    const MetricRow row = acc.add(r);
    welfare.push_back(row.social_welfare);
    completion.push_back(row.completion_ratio);
    mu_mean.push_back(row.mu_utility_mean);
    energy.push_back(row.energy);
    for (int i = 0; i < sc.I; ++i) mcsp[static_cast<std::size_t>(i)].push_back(row.mcsp_utility[static_cast<std::size_t>(i)]);
    if (!std::isnan(row.perception_error)) st.perception_error.push_back(row.perception_error);
    if (!r.explored) st.final_assignment = r.accepted;
    (r.t < cfg.steps / 2 ? st.collisions_first_half : st.collisions_second_half) += r.collisions;
    if (sink) sink(row);
  });

  st.social_welfare = tail_mean(welfare, cfg.window);
  st.completion_ratio = tail_mean(completion, cfg.window);
  st.mu_utility_mean = tail_mean(mu_mean, cfg.window);
  st.energy = tail_mean(energy, cfg.window);
  for (const auto& m : mcsp) st.mcsp_utility.push_back(tail_mean(m, cfg.window));
  st.collisions = acc.cumulative_collisions();
  return st;
}

std::vector<RunStats> simulate_runs(const ExperimentConfig& cfg, const std::string& strategy, std::string* csv) {
  const auto n = static_cast<std::size_t>(cfg.runs);
  std::vector<RunStats> stats(n);
  std::vector<std::string> text(csv ? n : 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t r; (r = next++) < n;) {
      try {
        RowSink sink;
        if (csv)
          sink = [&, r](const MetricRow& row) { append_metric_row(text[r], row, static_cast<int>(r), strategy); };
        stats[r] = simulate_run(cfg, strategy, static_cast<int>(r), sink);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (csv)
    for (auto& t : text) *csv += t;
  return stats;
}

StrategySummary summarize(const std::string& strategy, const std::vector<RunStats>& runs) {
  StrategySummary s;
  s.strategy = strategy;
  auto collect = [&](auto&& get) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(static_cast<double>(get(r)));
    return mean_std(v);
  };
  s.social_welfare = collect([](const RunStats& r) { return r.social_welfare; });
  s.completion_ratio = collect([](const RunStats& r) { return r.completion_ratio; });
  s.mu_utility_mean = collect([](const RunStats& r) { return r.mu_utility_mean; });
  s.energy = collect([](const RunStats& r) { return r.energy; });
  s.collisions = collect([](const RunStats& r) { return r.collisions; });
  s.collisions_first_half = collect([](const RunStats& r) { return r.collisions_first_half; });
  s.collisions_second_half = collect([](const RunStats& r) { return r.collisions_second_half; });
  const std::size_t I = runs.empty() ? 0 : runs.front().mcsp_utility.size();
  for (std::size_t i = 0; i < I; ++i) s.mcsp_utility.push_back(collect([i](const RunStats& r) { return r.mcsp_utility[i]; }));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!runs.empty() && !runs.front().perception_error.empty())
    s.final_perception_error = collect([](const RunStats& r) { return r.perception_error.back(); });
  else
    s.final_perception_error = {nan, nan};
  s.welfare_vs_copt = s.completion_vs_copt = nan;
  return s;
}

namespace {

json number(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

json ms_json(const MeanStd& m) { return {{"mean", number(m.mean)}, {"std", number(m.std)}}; }

json summary_json(const StrategySummary& s) {
  json j;
  j["social_welfare"] = ms_json(s.social_welfare);
  j["completion_ratio"] = ms_json(s.completion_ratio);
  j["mu_utility_mean"] = ms_json(s.mu_utility_mean);
  j["energy"] = ms_json(s.energy);
  j["mcsp_utility"] = json::array();
  for (const auto& m : s.mcsp_utility) j["mcsp_utility"].push_back(ms_json(m));
  j["collisions"] = ms_json(s.collisions);
  j["collisions_first_half"] = ms_json(s.collisions_first_half);
  j["collisions_second_half"] = ms_json(s.collisions_second_half);
  j["final_perception_error"] = ms_json(s.final_perception_error);
  j["welfare_vs_copt"] = number(s.welfare_vs_copt);
  j["completion_vs_copt"] = number(s.completion_vs_copt);
  return j;
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path partial = path.string() + ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + partial.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + partial.string());
  }
  fs::rename(partial, path);
}

}  // namespace

std::vector<ExperimentOutput> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);

  std::vector<std::pair<std::string, ExperimentConfig>> plan;
  if (cfg.sweep.axis.empty())
    plan.emplace_back("main", cfg);
  else
    for (int v : cfg.sweep.values) plan.emplace_back(cfg.sweep.axis + std::to_string(v), with_axis(cfg, cfg.sweep.axis, v));

  std::vector<ExperimentOutput> outputs;
  const std::string header = [&] {
    std::string h;
    append_line(h, metric_columns(cfg.scenario.mcsps));
    return h;
  }();
  for (const auto& [label, ecfg] : plan) {
    ExperimentOutput out;
    out.label = label;
    for (const auto& strategy : ecfg.strategies) {
      std::string csv = header;
      const auto runs = simulate_runs(ecfg, strategy, &csv);
      const fs::path file = fs::path(out_dir) / (label + "_" + strategy + ".csv");
      write_atomically(file, csv);
      out.csv_files.push_back(file.string());
      out.strategies.push_back(summarize(strategy, runs));
    }
    const auto copt = std::find_if(out.strategies.begin(), out.strategies.end(),
                                   [](const StrategySummary& s) { return s.strategy == "copt"; });
    if (copt != out.strategies.end()) {
      const double w = copt->social_welfare.mean, c = copt->completion_ratio.mean;
      for (auto& s : out.strategies) {
        s.welfare_vs_copt = s.social_welfare.mean / w;
        s.completion_vs_copt = s.completion_ratio.mean / c;
      }
    }
    outputs.push_back(std::move(out));
  }

  json j;
  j["config_hash"] = config_hash(cfg);
  j["config"] = json::parse(config_to_json(cfg));
  j["seed"] = cfg.seed;
  j["run_ids"] = json::array();
  for (int r = 0; r < cfg.runs; ++r) j["run_ids"].push_back(r);
  j["window"] = cfg.window;
  j["experiments"] = json::array();
  for (const auto& o : outputs) {
    json e;
    e["label"] = o.label;
    e["csv"] = json::array();
    for (const auto& f : o.csv_files) e["csv"].push_back(fs::path(f).filename().string());
    e["strategies"] = json::object();
    for (const auto& s : o.strategies) e["strategies"][s.strategy] = summary_json(s);
    j["experiments"].push_back(std::move(e));
  }
  write_atomically(fs::path(out_dir) / "summary.json", j.dump(2) + "\n");
  return outputs;
}

}  // namespace mcs
