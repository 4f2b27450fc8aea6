// Square linear assignment: shortest augmenting paths with dual potentials
// (Kuhn-Munkres in the Jonker-Volgenant formulation), O(n^3), followed by a
// pass that picks the lexicographically smallest optimum among all tight
// perfect matchings.
#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "semproj/errors.hpp"

namespace semproj {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  long double cost = 0;
};

namespace detail {

inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Re-routes `match` so that, row by row, each row takes the smallest column
// that still admits a perfect matching over tight edges.
inline void lexicographic_tight_matching(const std::vector<std::vector<std::size_t>>& tight,
                                         std::vector<std::size_t>& match) {
  const std::size_t n = match.size();
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[match[i]] = i;
  std::vector<char> fixed_col(n, 0), seen(n);
  std::vector<std::size_t> came_from(n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t target = match[i];
    for (std::size_t j : tight[i]) {
      if (fixed_col[j]) continue;
      if (j == target) break;
      // Alternating path from the current owner of j back to `target`.
      std::fill(seen.begin(), seen.end(), 0);
      const std::size_t start = owner[j];
      seen[start] = 1;
      came_from[start] = kNone;
      std::queue<std::size_t> q;
      q.push(start);
      std::size_t last_row = kNone;
      while (!q.empty() && last_row == kNone) {
        std::size_t x = q.front();
        q.pop();
        for (std::size_t y : tight[x]) {
          if (fixed_col[y] || y == j) continue;
          if (y == target) {
            last_row = x;
            break;
          }
          std::size_t nx = owner[y];
          if (seen[nx]) continue;
          seen[nx] = 1;
          came_from[nx] = x;
          q.push(nx);
        }
      }
      if (last_row == kNone) continue;
      // Each row on the path takes its successor's column; the last one takes `target`.
      std::size_t col = target;
      for (std::size_t x = last_row; x != kNone; x = came_from[x]) {
        std::size_t previous = match[x];
        match[x] = col;
        owner[col] = x;
        col = previous;
      }
      match[i] = j;
      owner[j] = i;
      break;
    }
    fixed_col[match[i]] = 1;
  }
}

}  // namespace detail

/// Minimum-cost perfect matching of a square row-major cost matrix with
/// finite entries. Ties resolve to the lexicographically smallest row->column
/// assignment.
inline Assignment solve_assignment(std::size_t n, std::span<const double> cost) {
  if (cost.size() != n * n) throw IntegrityError("assignment cost matrix is not square");
  Assignment out;
  if (n == 0) return out;
  using real = long double;
  const real inf = std::numeric_limits<real>::infinity();
  auto c = [&](std::size_t i, std::size_t j) -> real { return cost[i * n + j]; };
  real max_abs = 0;
  for (double x : cost) {
    if (!std::isfinite(x)) throw IntegrityError("assignment costs must be finite");
    max_abs = std::max<real>(max_abs, std::fabs(static_cast<real>(x)));
  }

  // 1-based rows and columns; column 0 is the virtual root of each search.
  std::vector<real> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      real delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        real cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  out.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.row_to_col[p[j] - 1] = j - 1;

  // Every optimal matching uses only edges that are tight under optimal duals.
  const real eps = 64 * static_cast<real>(n) * std::max<real>(max_abs, 1) * LDBL_EPSILON;
  std::vector<std::vector<std::size_t>> tight(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c(i, j) - u[i + 1] - v[j + 1] <= eps) tight[i].push_back(j);
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(tight[i].begin(), tight[i].end(), out.row_to_col[i]))
      throw IntegrityError("assignment solver left a non-tight edge");
  detail::lexicographic_tight_matching(tight, out.row_to_col);

  for (std::size_t i = 0; i < n; ++i) out.cost += c(i, out.row_to_col[i]);
  return out;
}

}  // namespace semproj
