#include "mcs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mcs {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

// Pulls known keys out of one JSON object; whatever is left is unknown.
class Section {
 public:
  Section(json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    if (!root[name_].is_object()) bad(name_, "expected an object");
    obj_ = std::move(root[name_]);
    root.erase(name_);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    auto* v = take(key);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!v->is_number_integer()) throw std::runtime_error("expected an integer");
        out = v->template get<int>();
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->template get<long long>() >= 0))
          throw std::runtime_error("expected a non-negative integer");
        out = v->template get<std::uint64_t>();
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v->is_number()) throw std::runtime_error("expected a number");
        out = v->template get<double>();
      } else {
        out = v->template get<T>();
      }
    } catch (const std::exception& e) {
      bad(path(key), e.what());
    }
  }

  void get(const std::string& key, Range& out) {
    auto* v = take(key);
    if (!v) return;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
      bad(path(key), "expected [min, max]");
    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  void get_int_pair(const std::string& key, int& lo, int& hi) {
    auto* v = take(key);
    if (!v) return;
    if (v->is_number_integer()) {
      lo = hi = v->get<int>();
      return;
    }
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer())
      bad(path(key), "expected an integer or [min, max]");
    lo = (*v)[0].get<int>();
    hi = (*v)[1].get<int>();
  }

  json* take(const std::string& key) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    taken_ = std::move(*it);
    obj_.erase(it);
    return &taken_;
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

  void finish() const {
    if (!obj_.empty()) bad(path(obj_.begin().key()), "unknown key");
  }

 private:
  std::string name_;
  json obj_ = json::object();
  json taken_;
};

void apply_override(json& root, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) bad(text, "override must look like key.path=value");
  const std::string key = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &root;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) bad(key, "empty path component");
    if (!node->is_object()) bad(key, "path crosses a non-object value");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

json sweep_json(const Sweep& s) {
  if (s.axis.empty()) return nullptr;
  return {{"axis", s.axis}, {"values", s.values}};
}

json to_json(const ExperimentConfig& c) {
  const auto& s = c.scenario;
  auto range = [](const Range& r) { return json::array({r.lo, r.hi}); };
  json j;
  j["scenario"] = {{"mcsps", s.mcsps},
                   {"mus", s.mus},
                   {"types", s.types},
                   {"payment_levels", s.payment_levels},
                   {"tasks_per_type", json::array({s.tasks_per_type_min, s.tasks_per_type_max})},
                   {"base_payment", range(s.base_payment)}};
  j["task"] = {{"data_mbit", range(s.data_mbit)},
               {"complexity", range(s.complexity)},
               {"result_mbit", range(s.result_mbit)}};
  j["mu"] = {{"cpu_ghz", range(s.cpu_ghz)},
             {"rate_mbps", range(s.rate_mbps)},
             {"sense_ms", range(s.sense_ms)},
             {"quality_mean", range(s.quality_mean)},
             {"p_sense", s.p_sense},
             {"p_comp", s.p_comp},
             {"p_comm", s.p_comm},
             {"alpha", s.alpha},
             {"beta", s.beta},
             {"epsilon", c.params.mu_epsilon},
             {"epsilon_decay", c.params.mu_decay}};
  j["noise"] = {{"time_cv", s.noise.time_cv}, {"quality_sd", s.noise.quality_sd}};
  j["prism"] = {{"epsilon", c.params.prism_epsilon}, {"epsilon_decay", c.params.prism_decay}};
  j["pacmab"] = {{"ucb_c", c.params.pacmab.ucb_c}, {"win_threshold", c.params.pacmab.win_threshold}};
  j["run"] = {{"seed", c.seed},
              {"runs", c.runs},
              {"steps", c.steps},
              {"window", c.window},
              {"strategies", c.strategies},
              {"sweep", sweep_json(c.sweep)}};
  return j;
}

ExperimentConfig from_json(json root) {
  if (!root.is_object()) bad("<root>", "config must be a JSON object");
  ExperimentConfig c;
  auto& s = c.scenario;
  {
    Section sec(root, "scenario");
    sec.get("mcsps", s.mcsps);
    sec.get("mus", s.mus);
    sec.get("types", s.types);
    sec.get("payment_levels", s.payment_levels);
    sec.get_int_pair("tasks_per_type", s.tasks_per_type_min, s.tasks_per_type_max);
    sec.get("base_payment", s.base_payment);
    sec.finish();
  }
  {
    Section sec(root, "task");
    sec.get("data_mbit", s.data_mbit);
    sec.get("complexity", s.complexity);
    sec.get("result_mbit", s.result_mbit);
    sec.finish();
  }
  {
    Section sec(root, "mu");
    sec.get("cpu_ghz", s.cpu_ghz);
    sec.get("rate_mbps", s.rate_mbps);
    sec.get("sense_ms", s.sense_ms);
    sec.get("quality_mean", s.quality_mean);
    sec.get("p_sense", s.p_sense);
    sec.get("p_comp", s.p_comp);
    sec.get("p_comm", s.p_comm);
    sec.get("alpha", s.alpha);
    sec.get("beta", s.beta);
    sec.get("epsilon", c.params.mu_epsilon);
    sec.get("epsilon_decay", c.params.mu_decay);
    sec.finish();
  }
  {
    Section sec(root, "noise");
    sec.get("time_cv", s.noise.time_cv);
    sec.get("quality_sd", s.noise.quality_sd);
    sec.finish();
  }
  {
    Section sec(root, "prism");
    sec.get("epsilon", c.params.prism_epsilon);
    sec.get("epsilon_decay", c.params.prism_decay);
    sec.finish();
  }
  {
    Section sec(root, "pacmab");
    sec.get("ucb_c", c.params.pacmab.ucb_c);
    sec.get("win_threshold", c.params.pacmab.win_threshold);
    sec.finish();
  }
  {
    Section sec(root, "run");
    sec.get("seed", c.seed);
    sec.get("runs", c.runs);
    sec.get("steps", c.steps);
    sec.get("window", c.window);
    sec.get("strategies", c.strategies);
    if (auto* sw = sec.take("sweep"); sw && !sw->is_null()) {
      if (sw->is_string()) {
        c.sweep = parse_sweep(sw->get<std::string>());
      } else {
        if (!sw->is_object() || !sw->contains("axis") || !sw->contains("values")) bad("run.sweep", "expected {axis, values}");
        try {
          c.sweep.axis = (*sw)["axis"].get<std::string>();
          c.sweep.values = (*sw)["values"].get<std::vector<int>>();
        } catch (const std::exception& e) {
          bad("run.sweep", e.what());
        }
      }
    }
    sec.finish();
  }
  if (!root.empty()) bad(root.begin().key(), "unknown section");
  c.validate();
  return c;
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  auto need = [](bool ok, const char* key, const char* what) {
    if (!ok) bad(key, what);
  };
  need(runs >= 1, "run.runs", "must be >= 1");
  need(steps >= 1, "run.steps", "must be >= 1");
  need(window >= 1, "run.window", "must be >= 1");
  need(!strategies.empty(), "run.strategies", "must name at least one strategy");
  for (const auto& s : strategies) {
    const auto& known = strategy_names();
    if (std::find(known.begin(), known.end(), s) == known.end()) bad("run.strategies", "unknown strategy '" + s + "'");
  }
  need(params.prism_epsilon >= 0 && params.prism_epsilon <= 1, "prism.epsilon", "must lie in [0,1]");
  need(params.prism_decay > 0 && params.prism_decay <= 1, "prism.epsilon_decay", "must lie in (0,1]");
  need(params.mu_epsilon >= 0 && params.mu_epsilon <= 1, "mu.epsilon", "must lie in [0,1]");
  need(params.mu_decay > 0 && params.mu_decay <= 1, "mu.epsilon_decay", "must lie in (0,1]");
  need(params.pacmab.ucb_c >= 0, "pacmab.ucb_c", "must be >= 0");
  need(params.pacmab.win_threshold >= 0 && params.pacmab.win_threshold <= 1, "pacmab.win_threshold",
       "must lie in [0,1]");
  if (!sweep.axis.empty()) {
    need(sweep.axis == "K" || sweep.axis == "Z", "run.sweep", "axis must be K or Z");
    need(!sweep.values.empty(), "run.sweep", "needs at least one value");
    for (int v : sweep.values) need(v >= 1, "run.sweep", "values must be >= 1");
  }
}

ExperimentConfig desk_profile() {
  ExperimentConfig c;
  // Each MCSP has K*Z*P = 2000 arms; by T=5000 an arm has seen about 25
  // offers, too few for a c=2 bonus to stop driving the choice.
  c.params.pacmab.ucb_c = 0.25;
  return c;
}

ExperimentConfig full_profile() {
  ExperimentConfig c;
  c.scenario.mus = 50;
  c.scenario.tasks_per_type_min = c.scenario.tasks_per_type_max = 5;
  c.steps = 10000;
  c.runs = 100;
  return c;
}

ExperimentConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides) {
  json root = json::parse(json_text, nullptr, false, true);
  if (root.is_discarded()) throw ConfigError("<root>: not valid JSON");
  if (root.is_null()) root = json::object();
  // Start from the desk profile so a partial file only states differences.
  json merged = to_json(desk_profile());
  if (!root.is_object()) bad("<root>", "config must be a JSON object");
  merged.merge_patch(root);
  for (const auto& o : overrides) apply_override(merged, o);
  return from_json(std::move(merged));
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot read config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string config_to_json(const ExperimentConfig& cfg) { return to_json(cfg).dump(); }

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config_to_json(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Sweep parse_sweep(const std::string& spec) {
  Sweep s;
  const auto eq = spec.find('=');
  if (eq == std::string::npos) bad("run.sweep", "expected AXIS=v1,v2,...");
  s.axis = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      bad("run.sweep", "bad value '" + item + "'");
    s.values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return s;
}

ExperimentConfig with_axis(const ExperimentConfig& base, const std::string& axis, int value) {
  ExperimentConfig c = base;
  c.sweep = {};
  if (axis == "K")
    c.scenario.mus = value;
  else if (axis == "Z")
    c.scenario.types = value;
  else
    bad("run.sweep", "axis must be K or Z");
  return c;
}

}  // namespace mcs
