#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mcs {

// Weight of a cell that must not be matched.
inline constexpr double kForbidden = -1e9;

struct InfeasibleAssignment : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> w;

  WeightMatrix() = default;
  WeightMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), w(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}
  WeightMatrix(std::initializer_list<std::initializer_list<double>> init) {
    rows = static_cast<int>(init.size());
    cols = rows ? static_cast<int>(init.begin()->size()) : 0;
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("ragged weight matrix");
      w.insert(w.end(), row.begin(), row.end());
    }
  }

  double& at(int r, int c) { return w[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return w[static_cast<std::size_t>(r) * cols + c]; }
};

inline bool is_forbidden(double x) { return x <= kForbidden / 2; }

struct AssignmentResult {
  std::vector<std::pair<int, int>> matching;  // (row, col), ascending rows
  std::vector<int> col_of_row;                // -1 when unassigned
  double total_value = 0.0;
};

namespace detail {

inline AssignmentResult finish(const WeightMatrix& m, const std::vector<int>& col_of_row_sq) {
  AssignmentResult res;
  res.col_of_row.assign(static_cast<std::size_t>(m.rows), -1);
  for (int r = 0; r < m.rows; ++r) {
    const int c = col_of_row_sq[static_cast<std::size_t>(r)];
    if (c < 0 || c >= m.cols) continue;
    if (is_forbidden(m.at(r, c))) throw InfeasibleAssignment("no feasible assignment");
    res.col_of_row[static_cast<std::size_t>(r)] = c;
    res.matching.emplace_back(r, c);
    res.total_value += m.at(r, c);
  }
  return res;
}

}  // namespace detail

// Maximum-weight assignment. Non-square inputs are padded with zero-weight
// dummy rows/columns; a row matched to a dummy column is unassigned. Among
// optimal matchings the one with the lexicographically smallest column
// sequence (row 0 first) is returned.
inline AssignmentResult solve_max_weight_assignment(const WeightMatrix& m) {
  const int n = std::max(m.rows, m.cols);
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  auto cost = [&](int r, int c) {  // 0-indexed, padded
    if (r >= m.rows || c >= m.cols) return 0.0;
    return -m.at(r, c);
  };

  // Shortest augmenting path Hungarian, 1-indexed potentials.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  std::vector<double> minv(static_cast<std::size_t>(n) + 1);
  std::vector<char> used(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of(static_cast<std::size_t>(n)), row_of(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    row_of[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] - 1;
    col_of[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }

  // Lexicographic refinement over the equality subgraph: row r moves to a
  // smaller tight column when an alternating cycle through unfixed rows
  // lets the displaced rows keep optimal (tight) partners.
  double scale = 1.0;
  for (double x : m.w)
    if (!is_forbidden(x)) scale = std::max(scale, std::abs(x));
  const double eps = 1e-9 * scale;
  auto tight = [&](int r, int c) {
    return cost(r, c) - u[static_cast<std::size_t>(r) + 1] - v[static_cast<std::size_t>(c) + 1] <= eps;
  };
  auto value_of = [&](const std::vector<int>& cols) {
    double s = 0.0;
    for (int r = 0; r < m.rows; ++r) {
      const int c = cols[static_cast<std::size_t>(r)];
      if (c < m.cols) s += m.at(r, c);
    }
    return s;
  };
  const std::vector<int> original = col_of;
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  std::vector<int> parent_col(static_cast<std::size_t>(n));
  std::vector<char> reach(static_cast<std::size_t>(n));
  std::vector<int> queue;
  for (int r = 0; r < n; ++r) {
    const int cur = col_of[static_cast<std::size_t>(r)];
    bool candidate = false;
    for (int c = 0; c < cur && !candidate; ++c) candidate = tight(r, c);
    if (candidate) {
      // Rows that can hand their column over along a tight path ending at cur.
      std::fill(reach.begin(), reach.end(), 0);
      queue.assign(1, cur);
      for (std::size_t h = 0; h < queue.size(); ++h) {
        const int c = queue[h];
        for (int x = 0; x < n; ++x) {
          if (x == r || fixed[static_cast<std::size_t>(x)] || reach[static_cast<std::size_t>(x)]) continue;
          if (col_of[static_cast<std::size_t>(x)] == c || !tight(x, c)) continue;
          reach[static_cast<std::size_t>(x)] = 1;
          parent_col[static_cast<std::size_t>(x)] = c;
          queue.push_back(col_of[static_cast<std::size_t>(x)]);
        }
      }
      for (int c = 0; c < cur; ++c) {
        const int owner = row_of[static_cast<std::size_t>(c)];
        if (!tight(r, c) || fixed[static_cast<std::size_t>(owner)] || !reach[static_cast<std::size_t>(owner)]) continue;
        std::vector<std::pair<int, int>> moves{{r, c}};
        for (int x = owner;;) {
          const int dest = parent_col[static_cast<std::size_t>(x)];
          moves.emplace_back(x, dest);
          if (dest == cur) break;
          x = row_of[static_cast<std::size_t>(dest)];
        }
        for (auto [row, col] : moves) {
          col_of[static_cast<std::size_t>(row)] = col;
          row_of[static_cast<std::size_t>(col)] = row;
        }
        break;
      }
    }
    fixed[static_cast<std::size_t>(r)] = 1;
  }
  if (value_of(col_of) < value_of(original)) col_of = original;
  return detail::finish(m, col_of);
}

// Exhaustive oracle over the same padded problem. Rows pick columns in
// ascending order (real columns before dummies) and the first maximum is
// kept, so ties resolve exactly as the solver documents.
inline AssignmentResult brute_force_assignment(const WeightMatrix& m) {
  if (std::min(m.rows, m.cols) > 8) throw std::invalid_argument("brute force limited to min(rows, cols) <= 8");
  if (m.rows == 0) return {};
  const int dummies = std::max(0, m.rows - m.cols);
  double leaves = 1.0;
  for (int r = 0, avail = m.cols + dummies; r < m.rows; ++r, --avail) leaves *= avail;
  if (leaves > 5e7) throw std::invalid_argument("brute force enumeration too large");

  std::vector<int> cur(static_cast<std::size_t>(m.rows), -1), best;
  std::vector<char> taken(static_cast<std::size_t>(m.cols), 0);
  double best_value = -std::numeric_limits<double>::infinity();
  int dummies_used = 0;
  auto dfs = [&](auto&& self, int r, double acc) -> void {
    if (r == m.rows) {
      if (acc > best_value) {
        best_value = acc;
        best = cur;
      }
      return;
    }
    for (int c = 0; c < m.cols; ++c) {
      if (taken[static_cast<std::size_t>(c)]) continue;
      taken[static_cast<std::size_t>(c)] = 1;
      cur[static_cast<std::size_t>(r)] = c;
      self(self, r + 1, acc + m.at(r, c));
      taken[static_cast<std::size_t>(c)] = 0;
    }
    if (dummies_used < dummies) {
      ++dummies_used;
      cur[static_cast<std::size_t>(r)] = m.cols;
      self(self, r + 1, acc);
      --dummies_used;
    }
  };
  dfs(dfs, 0, 0.0);
  return detail::finish(m, best);
}

}  // namespace mcs
