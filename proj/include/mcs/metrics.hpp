#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mcs/engine.hpp"

namespace mcs {

inline constexpr int kDefaultWindow = 100;

// Sum of MCSP and MU utilities over the step's executions.
inline double social_welfare(const StepRecord& r) {
  double w = 0.0;
  for (double u : r.mcsp_utility) w += u;
  for (double u : r.mu_utility) w += u;
  return w;
}

inline double completion_ratio(const StepRecord& r) {
  return r.available == 0 ? 1.0 : static_cast<double>(r.completed) / r.available;
}

inline double mu_utility_mean(const StepRecord& r) {
  if (r.mu_utility.empty()) return 0.0;
  return std::accumulate(r.mu_utility.begin(), r.mu_utility.end(), 0.0) / static_cast<double>(r.mu_utility.size());
}

// One CSV row worth of per-step metrics.
struct MetricRow {
  int t = 0;
  double social_welfare = 0.0;
  std::vector<double> mcsp_utility;
  double mu_utility_mean = 0.0;
  double completion_ratio = 0.0;
  long cum_collisions = 0;
  double energy = 0.0;
  double perception_error = std::numeric_limits<double>::quiet_NaN();
};

// Folds step records into rows, carrying the cumulative collision count.
class MetricAccumulator {
 public:
  MetricRow add(const StepRecord& r) {
    cum_ += r.collisions;
    MetricRow m;
    m.t = r.t;
    m.social_welfare = social_welfare(r);
    m.mcsp_utility = r.mcsp_utility;
    m.mu_utility_mean = mcs::mu_utility_mean(r);
    m.completion_ratio = completion_ratio(r);
    m.cum_collisions = cum_;
    m.energy = r.energy;
    m.perception_error = r.perception_error;
    return m;
  }
  long cumulative_collisions() const { return cum_; }

 private:
  long cum_ = 0;
};

// Trailing rolling mean; entry t averages the last min(t+1, w) values.
inline std::vector<double> rolling_mean(const std::vector<double>& x, int w) {
  std::vector<double> out(x.size());
  double s = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    s += x[t];
    if (t >= static_cast<std::size_t>(w)) s -= x[t - static_cast<std::size_t>(w)];
    out[t] = s / static_cast<double>(std::min<std::size_t>(t + 1, static_cast<std::size_t>(w)));
  }
  return out;
}

// Mean of the last w entries (all of them if shorter).
inline double tail_mean(const std::vector<double>& x, int w) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t n = std::min(x.size(), static_cast<std::size_t>(std::max(w, 1)));
  return std::accumulate(x.end() - static_cast<std::ptrdiff_t>(n), x.end(), 0.0) / static_cast<double>(n);
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

inline MeanStd mean_std(const std::vector<double>& x) {
  MeanStd r;
  if (x.empty()) return r;
  r.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(x.size() - 1));
  }
  return r;
}

// Per-step mean and std across runs; runs shorter than the longest are
// ignored past their end.
inline std::vector<MeanStd> across_runs(const std::vector<std::vector<double>>& runs) {
  std::size_t len = 0;
  for (const auto& r : runs) len = std::max(len, r.size());
  std::vector<MeanStd> out(len);
  std::vector<double> col;
  for (std::size_t t = 0; t < len; ++t) {
    col.clear();
    for (const auto& r : runs)
      if (t < r.size()) col.push_back(r[t]);
    out[t] = mean_std(col);
  }
  return out;
}

struct DecayFit {
  double lambda = 0.0;  // per step
  double floor = 0.0;
  double r2 = 0.0;
  bool degenerate = false;
};

namespace detail {

// floor + A e^{-lambda t} with log A and lambda from least squares of
// log(max(y - floor, tiny)) on t. Points are weighted by (y - floor)^2 so
// the log-space fit tracks the residuals on the original scale; r2 is the
// model's R^2 on that scale.
inline DecayFit fit_with_floor(const std::vector<double>& y, double floor, double tiny) {
  double n = 0, st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double d = std::max(y[t] - floor, tiny);
    const double w = d * d;
    const double x = static_cast<double>(t);
    const double l = std::log(d);
    n += w;
    st += w * x;
    sl += w * l;
    stt += w * x * x;
    stl += w * x * l;
  }
  DecayFit f;
  f.floor = floor;
  f.r2 = -std::numeric_limits<double>::infinity();
  const double vx = stt - st * st / n;
  if (n <= 0.0 || vx <= 0.0) return f;
  const double slope = (stl - st * sl / n) / vx;
  const double icpt = (sl - slope * st) / n;
  f.lambda = -slope;

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double m = floor + std::exp(icpt + slope * static_cast<double>(t));
    ss_res += (y[t] - m) * (y[t] - m);
    ss_tot += (y[t] - mean) * (y[t] - mean);
  }
  f.r2 = 1.0 - ss_res / ss_tot;
  return f;
}

}  // namespace detail

// Fits y(t) ~ floor + A e^{-lambda t}. Candidate floors run from
// min(0, min y - range) to a quarter of the range above min y, since noise
// around a plateau dips below it; points under a candidate get almost no
// weight. The floor whose fit explains the series best wins, refined by
// golden-section search around the best grid point.
inline DecayFit fit_exponential_decay(const std::vector<double>& y) {
  DecayFit out;
  if (y.size() < 2) {
    out.degenerate = true;
    return out;
  }
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  const double lo = *lo_it, hi = *hi_it;
  const double range = hi - lo;
  if (range <= 1e-12 * std::max(1.0, std::abs(hi))) {
    out.degenerate = true;
    return out;
  }
  const double tiny = 1e-9 * range;
  const double top = lo + 0.25 * range;
  const double bottom = std::min(0.0, lo - range);
  auto score = [&](double f) { return detail::fit_with_floor(y, f, tiny).r2; };

  constexpr int grid = 200;
  const double step = (top - bottom) / grid;
  double best_f = bottom;
  double best = score(bottom);
  for (int g = 1; g <= grid; ++g) {
    const double f = bottom + step * g;
    const double s = score(f);
    if (s > best) {
      best = s;
      best_f = f;
    }
  }
  double a = std::max(bottom, best_f - step), b = std::min(top, best_f + step);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100 && b - a > 1e-12 * range; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (score(c) >= score(d))
      b = d;
    else
      a = c;
  }
  const double refined = 0.5 * (a + b);
  if (score(refined) > best) best_f = refined;

  out = detail::fit_with_floor(y, best_f, tiny);
  out.degenerate = !std::isfinite(out.r2);
  return out;
}

// Lipschitz constant for the utility gap: every MU paid the top of the grid.
inline double utility_gap_constant(const Scenario& sc) {
  double top = 0.0;
  for (int i = 0; i < sc.I; ++i)
    for (int z = 0; z < sc.Z; ++z) top = std::max(top, sc.payment(i, z, sc.P - 1));
  return sc.K * top;
}

inline bool utility_gap_bound_check(double final_mean_utility, double proxy_utility, double residual_error, double L) {
  return final_mean_utility >= proxy_utility - L * residual_error;
}

}  // namespace mcs
