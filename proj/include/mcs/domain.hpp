#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcs/rng.hpp"

namespace mcs {

struct InvalidProfile : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskTypeSpec {
  int z = 0;
  double data_bits = 0.0;    // d_z
  double complexity = 0.0;   // c_z, cycles per bit
  double result_bits = 0.0;  // s_z
  // Indexed by MCSP.
  std::vector<double> base_payment;
  std::vector<int> quota;
  std::vector<std::vector<double>> payment_grid;

  int levels() const {
    return payment_grid.empty() ? 0 : static_cast<int>(payment_grid[0].size());
  }

  void validate() const {
    if (!(data_bits > 0 && complexity > 0 && result_bits > 0))
      throw InvalidProfile("task type " + std::to_string(z) + ": sizes must be positive");
    if (!(result_bits < data_bits))
      throw InvalidProfile("task type " + std::to_string(z) + ": result must be smaller than data");
    if (base_payment.size() != quota.size() || quota.size() != payment_grid.size())
      throw InvalidProfile("task type " + std::to_string(z) + ": per-MCSP vectors differ in size");
    for (std::size_t i = 0; i < payment_grid.size(); ++i) {
      if (!(base_payment[i] > 0)) throw InvalidProfile("base payment must be positive");
      if (quota[i] < 0) throw InvalidProfile("quota must be non-negative");
      const auto& g = payment_grid[i];
      if (g.size() < 2) throw InvalidProfile("payment grid needs at least two levels");
      for (std::size_t p = 1; p < g.size(); ++p)
        if (!(g[p] > g[p - 1])) throw InvalidProfile("payment grid must be strictly increasing");
    }
  }
};

// Levels linearly spaced over [0, 2w].
inline std::vector<double> make_payment_grid(double base_payment, int levels) {
  std::vector<double> g(static_cast<std::size_t>(levels));
  for (int p = 0; p < levels; ++p)
    g[static_cast<std::size_t>(p)] = 2.0 * base_payment * p / (levels - 1);
  return g;
}

struct MuProfile {
  int k = 0;
  double f_local = 0.0;  // Hz
  double p_sense = 0.0, p_comp = 0.0, p_comm = 0.0;  // W
  double alpha = 0.0;  // per second
  double beta = 0.0;   // per joule
  std::vector<double> mean_sense_time;               // [z]
  std::vector<std::vector<double>> mean_comm_time;   // [i][z]
  std::vector<std::vector<double>> quality_mean;     // [i][z]

  void validate() const {
    if (!(f_local > 0)) throw InvalidProfile("MU " + std::to_string(k) + ": CPU frequency must be positive");
    if (!(p_sense > 0 && p_comp > 0 && p_comm > 0 && alpha > 0 && beta > 0))
      throw InvalidProfile("MU " + std::to_string(k) + ": powers and cost weights must be positive");
    for (auto t : mean_sense_time)
      if (!(t > 0)) throw InvalidProfile("MU " + std::to_string(k) + ": sensing time must be positive");
    for (const auto& row : mean_comm_time)
      for (auto t : row)
        if (!(t > 0)) throw InvalidProfile("MU " + std::to_string(k) + ": comm time must be positive");
    for (const auto& row : quality_mean)
      for (auto q : row)
        if (!(q >= 0 && q <= 1)) throw InvalidProfile("MU " + std::to_string(k) + ": quality mean outside [0,1]");
  }
};

struct NoiseModel {
  double time_cv = 0.2;     // sensing and comm times
  double quality_sd = 0.1;
};

struct Offer {
  int mcsp = 0;
  int mu = 0;
  int task_id = 0;
  int task_type = 0;
  int payment_level = 0;
  double payment = 0.0;
};

struct Contract {
  int mcsp = 0;
  int mu = 0;
  int task_type = 0;
  int payment_level = 0;
  auto operator<=>(const Contract&) const = default;
};

struct ExecutionOutcome {
  double t_sense = 0, t_comp = 0, t_comm = 0;
  double e_sense = 0, e_comp = 0, e_comm = 0;
  double effort_cost = 0;
  double quality = 0;
  double payment = 0;
  double realized_revenue = 0;
  double mcsp_utility = 0;
  double mu_utility = 0;

  double total_time() const { return t_sense + t_comp + t_comm; }
  double total_energy() const { return e_sense + e_comp + e_comm; }
};

enum class Decision { accept, reject };
enum class RejectReason { none, negative_utility, chose_competitor };

struct ResponseFeedback {
  Decision decision = Decision::reject;
  RejectReason reason = RejectReason::none;
  // Filled for chose_competitor.
  int competitor = -1;
  double competitor_payment = 0.0;
  int competitor_type = -1;

  bool accepted() const { return decision == Decision::accept; }
};

inline double compute_computation_time(double complexity, double data_bits, double f_local) {
  if (!(f_local > 0)) throw InvalidProfile("CPU frequency must be positive");
  return complexity * data_bits / f_local;
}

inline double effort_cost(double alpha, double beta, double time, double energy) {
  return alpha * time + beta * energy;
}

inline double realized_revenue(double base_payment, double quality) {
  if (!(quality >= 0.0 && quality <= 1.0))
    throw ContractViolation("quality outside [0,1]: " + std::to_string(quality));
  return (1.0 + quality) * base_payment;
}

inline double mcsp_offer_utility(double revenue, double payment) { return revenue - payment; }
inline double mu_offer_utility(double payment, double cost) { return payment - cost; }

// Times, energies, cost and quality. Payment-dependent fields stay zero
// until settle().
inline ExecutionOutcome sample_execution(const MuProfile& mu, const TaskTypeSpec& type, int mcsp,
                                         const NoiseModel& noise, Rng& rng) {
  const auto z = static_cast<std::size_t>(type.z);
  const auto i = static_cast<std::size_t>(mcsp);
  ExecutionOutcome out;
  const double ts = mu.mean_sense_time[z];
  const double tm = mu.mean_comm_time[i][z];
  out.t_sense = rng.truncated_normal(ts, noise.time_cv * ts);
  out.t_comp = compute_computation_time(type.complexity, type.data_bits, mu.f_local);
  out.t_comm = rng.truncated_normal(tm, noise.time_cv * tm);
  out.e_sense = out.t_sense * mu.p_sense;
  out.e_comp = out.t_comp * mu.p_comp;
  out.e_comm = out.t_comm * mu.p_comm;
  out.effort_cost = effort_cost(mu.alpha, mu.beta, out.total_time(), out.total_energy());
  out.quality = std::clamp(rng.normal(mu.quality_mean[i][z], noise.quality_sd), 0.0, 1.0);
  return out;
}

inline void settle(ExecutionOutcome& out, double base_payment, double payment) {
  out.payment = payment;
  out.realized_revenue = realized_revenue(base_payment, out.quality);
  out.mcsp_utility = mcsp_offer_utility(out.realized_revenue, payment);
  out.mu_utility = mu_offer_utility(payment, out.effort_cost);
}

// Mean of clamp(N(mean, sd), 0, 1).
inline double expected_quality(double mean, double sd) {
  if (sd <= 0.0) return std::clamp(mean, 0.0, 1.0);
  auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  const double a = (0.0 - mean) / sd;
  const double b = (1.0 - mean) / sd;
  const double inside = mean * (Phi(b) - Phi(a)) + sd * (phi(a) - phi(b));
  return inside + (1.0 - Phi(b));
}

// Truncation at zero is ignored here; with the default CV it moves the
// mean by less than 1e-6 relative.
inline double expected_effort_cost(const MuProfile& mu, const TaskTypeSpec& type, int mcsp) {
  const auto z = static_cast<std::size_t>(type.z);
  const double ts = mu.mean_sense_time[z];
  const double tc = compute_computation_time(type.complexity, type.data_bits, mu.f_local);
  const double tm = mu.mean_comm_time[static_cast<std::size_t>(mcsp)][z];
  const double energy = ts * mu.p_sense + tc * mu.p_comp + tm * mu.p_comm;
  return effort_cost(mu.alpha, mu.beta, ts + tc + tm, energy);
}

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::negative_utility: return "negative_utility";
    case RejectReason::chose_competitor: return "chose_competitor";
  }
  return "unknown";
}

}  // namespace mcs
