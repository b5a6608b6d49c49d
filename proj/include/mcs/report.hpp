#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "mcs/metrics.hpp"

namespace mcs {

// RFC 4180: quote fields holding a comma, quote, CR or LF; double quotes.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Shortest round-trip text; NaN becomes an empty field.
inline std::string format_number(double x) {
  if (std::isnan(x)) return {};
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::vector<std::string> metric_columns(int mcsps) {
  std::vector<std::string> cols{"t", "run_id", "strategy", "social_welfare"};
  for (int i = 0; i < mcsps; ++i) cols.push_back("mcsp_utility_" + std::to_string(i));
  for (const char* c : {"mu_utility_mean", "completion_ratio", "cum_collisions", "energy", "perception_error"})
    cols.emplace_back(c);
  return cols;
}

inline void append_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t n = 0; n < fields.size(); ++n) {
    if (n) out += ',';
    out += csv_field(fields[n]);
  }
  out += "\r\n";
}

inline void append_metric_row(std::string& out, const MetricRow& r, int run, const std::string& strategy) {
  std::vector<std::string> f{std::to_string(r.t), std::to_string(run), strategy, format_number(r.social_welfare)};
  for (double u : r.mcsp_utility) f.push_back(format_number(u));
  f.push_back(format_number(r.mu_utility_mean));
  f.push_back(format_number(r.completion_ratio));
  f.push_back(std::to_string(r.cum_collisions));
  f.push_back(format_number(r.energy));
  f.push_back(format_number(r.perception_error));
  append_line(out, f);
}

}  // namespace mcs
