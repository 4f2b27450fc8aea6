// Bipartite alignment graphs and the optimal-subgraph solvers: perfect
// matching, edge cover (via an auxiliary assignment problem) and total
// alignment, plus an exhaustive oracle for small instances.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semproj/assignment.hpp"
#include "semproj/errors.hpp"
#include "semproj/similarity.hpp"

namespace semproj {

enum class ConstraintClass { Perfect, EdgeCover, Total, Word };
enum class PaddingSide { None, Source, Target };

inline std::string_view to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::Perfect: return "perfect";
    case ConstraintClass::EdgeCover: return "edgecover";
    case ConstraintClass::Total: return "total";
    case ConstraintClass::Word: return "word";
  }
  return "?";
}

/// Unit id used for padding ("empty") nodes.
inline constexpr int kEmptyUnit = -1;

struct AlignmentGraph {
  SimilarityMatrix sim;  // padded alongside weights; padding similarity is 0
  WeightMatrix weights;
  int n_src_real = 0;
  int n_tgt_real = 0;
  PaddingSide padding = PaddingSide::None;

  int rows() const { return weights.rows(); }
  int cols() const { return weights.cols(); }
  double big() const { return weights.big; }
};

struct AlignmentLink {
  int src = 0;  // row of the graph
  int tgt = 0;  // column of the graph
  int src_unit = 0;
  int tgt_unit = 0;
  double sim = 0;
  double weight = 0;
  // Zero-similarity link kept only to satisfy degree constraints.
  bool zero_sim = false;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

struct SemanticAlignment {
  std::vector<AlignmentLink> links;  // sorted by (src, tgt)
  ConstraintClass constraint_class = ConstraintClass::Perfect;
  // Objective value over the whole (possibly padded) graph.
  double cost = 0;

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& l : links) out.emplace_back(l.src, l.tgt);
    return out;
  }
};

inline AlignmentGraph build_graph(const SimilarityMatrix& m, double big, ConstraintClass for_class) {
  if (m.rows() == 0 || m.cols() == 0)
    throw DegenerateInputError("alignment graph needs two non-empty partitions");
  AlignmentGraph g;
  g.n_src_real = m.rows();
  g.n_tgt_real = m.cols();
  g.sim = m;
  if (for_class == ConstraintClass::Perfect && m.rows() != m.cols()) {
    int n = std::max(m.rows(), m.cols());
    std::vector<int> src = m.src_units, tgt = m.tgt_units;
    src.resize(static_cast<std::size_t>(n), kEmptyUnit);
    tgt.resize(static_cast<std::size_t>(n), kEmptyUnit);
    SimilarityMatrix padded(src, tgt);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) padded.at(i, j) = m.at(i, j);
    g.sim = std::move(padded);
    g.padding = m.rows() < m.cols() ? PaddingSide::Source : PaddingSide::Target;
  }
  g.weights = to_weights(g.sim, big);
  return g;
}

namespace detail {

inline AlignmentLink make_link(const AlignmentGraph& g, int i, int j) {
  AlignmentLink l;
  l.src = i;
  l.tgt = j;
  l.src_unit = g.sim.src_units[static_cast<std::size_t>(i)];
  l.tgt_unit = g.sim.tgt_units[static_cast<std::size_t>(j)];
  l.sim = g.sim.at(i, j);
  l.weight = g.weights.at(i, j);
  l.zero_sim = l.sim <= 0.0;
  return l;
}

inline SemanticAlignment finish(const AlignmentGraph& g, std::set<std::pair<int, int>> cells,
                                ConstraintClass cls, long double padding_cost = 0) {
  SemanticAlignment a;
  a.constraint_class = cls;
  long double cost = padding_cost;
  for (const auto& [i, j] : cells) {
    a.links.push_back(make_link(g, i, j));
    cost += g.weights.at(i, j);
  }
  a.cost = static_cast<double>(cost);
  return a;
}

}  // namespace detail

/// Sum of link weights, accumulated in extended precision.
inline double alignment_cost(const AlignmentGraph& g, const std::vector<std::pair<int, int>>& cells) {
  long double cost = 0;
  for (const auto& [i, j] : cells) cost += g.weights.at(i, j);
  return static_cast<double>(cost);
}

inline SemanticAlignment solve_perfect_matching(const AlignmentGraph& g) {
  if (g.rows() != g.cols()) throw IntegrityError("perfect matching needs a square (padded) graph");
  auto sol = solve_assignment(static_cast<std::size_t>(g.rows()), g.weights.weight);
  std::set<std::pair<int, int>> cells;
  long double padding_cost = 0;
  for (std::size_t i = 0; i < sol.row_to_col.size(); ++i) {
    int r = static_cast<int>(i), c = static_cast<int>(sol.row_to_col[i]);
    if (r < g.n_src_real && c < g.n_tgt_real)
      cells.insert({r, c});
    else
      padding_cost += g.weights.at(r, c);
  }
  return detail::finish(g, std::move(cells), ConstraintClass::Perfect, padding_cost);
}

/// Minimum-weight edge cover. Solved as an assignment over partitions
/// U_s + U_t' and U_t + U_s': original cells and their mirror carry w, a unit
/// paired with its own mirror pays twice its cheapest incident weight. The
/// source-target block of the optimum is a matching M with
/// w(M) + sum of cheapest weights of units outside M minimal, which is the
/// optimal edge cover once every unmatched unit takes its cheapest edge.
inline SemanticAlignment solve_edge_cover(const AlignmentGraph& g) {
  if (g.padding != PaddingSide::None) throw IntegrityError("edge cover runs on an unpadded graph");
  const int n = g.rows(), m = g.cols();
  if (n == 0 || m == 0) throw DegenerateInputError("edge cover needs two non-empty partitions");

  std::vector<int> best_tgt(static_cast<std::size_t>(n)), best_src(static_cast<std::size_t>(m));
  double max_w = 0;
  for (int i = 0; i < n; ++i) {
    int b = 0;
    for (int j = 0; j < m; ++j) {
      if (g.weights.at(i, j) < g.weights.at(i, b)) b = j;
      max_w = std::max(max_w, g.weights.at(i, j));
    }
    best_tgt[static_cast<std::size_t>(i)] = b;
  }
  for (int j = 0; j < m; ++j) {
    int b = 0;
    for (int i = 0; i < n; ++i)
      if (g.weights.at(i, j) < g.weights.at(b, j)) b = i;
    best_src[static_cast<std::size_t>(j)] = b;
  }
  auto delta_src = [&](int i) { return g.weights.at(i, best_tgt[static_cast<std::size_t>(i)]); };
  auto delta_tgt = [&](int j) { return g.weights.at(best_src[static_cast<std::size_t>(j)], j); };

  // Any assignment using a forbidden cell costs more than the all-mirror one.
  const std::size_t size = static_cast<std::size_t>(n + m);
  const double forbidden = 4.0 * static_cast<double>(size) * (max_w + 1.0);
  std::vector<double> aux(size * size, forbidden);
  auto cell = [&](int r, int c) -> double& {
    return aux[static_cast<std::size_t>(r) * size + static_cast<std::size_t>(c)];
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      cell(i, j) = g.weights.at(i, j);
      cell(n + j, m + i) = g.weights.at(i, j);
    }
    cell(i, m + i) = 2.0 * delta_src(i);
  }
  for (int j = 0; j < m; ++j) cell(n + j, j) = 2.0 * delta_tgt(j);

  auto sol = solve_assignment(size, aux);
  std::set<std::pair<int, int>> cells;
  std::vector<char> tgt_covered(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < n; ++i) {
    int c = static_cast<int>(sol.row_to_col[static_cast<std::size_t>(i)]);
    if (c < m) {
      cells.insert({i, c});
      tgt_covered[static_cast<std::size_t>(c)] = 1;
    } else {
      cells.insert({i, best_tgt[static_cast<std::size_t>(i)]});
    }
  }
  for (int j = 0; j < m; ++j)
    if (!tgt_covered[static_cast<std::size_t>(j)]) cells.insert({best_src[static_cast<std::size_t>(j)], j});

  // A link whose endpoints both have degree >= 2 is redundant; drop it.
  std::vector<int> deg_s(static_cast<std::size_t>(n), 0), deg_t(static_cast<std::size_t>(m), 0);
  for (const auto& [i, j] : cells) ++deg_s[static_cast<std::size_t>(i)], ++deg_t[static_cast<std::size_t>(j)];
  for (auto it = cells.begin(); it != cells.end();) {
    auto [i, j] = *it;
    if (deg_s[static_cast<std::size_t>(i)] >= 2 && deg_t[static_cast<std::size_t>(j)] >= 2) {
      --deg_s[static_cast<std::size_t>(i)], --deg_t[static_cast<std::size_t>(j)];
      it = cells.erase(it);
    } else {
      ++it;
    }
  }
  return detail::finish(g, std::move(cells), ConstraintClass::EdgeCover);
}

/// Each source unit linked to its most similar target; lowest index on ties.
inline SemanticAlignment solve_total(const AlignmentGraph& g) {
  std::set<std::pair<int, int>> cells;
  for (int i = 0; i < g.n_src_real; ++i) {
    int best = 0;
    for (int j = 1; j < g.n_tgt_real; ++j)
      if (g.weights.at(i, j) < g.weights.at(i, best)) best = j;
    cells.insert({i, best});
  }
  return detail::finish(g, std::move(cells), ConstraintClass::Total);
}

inline SemanticAlignment solve(const AlignmentGraph& g, ConstraintClass cls) {
  switch (cls) {
    case ConstraintClass::Perfect: return solve_perfect_matching(g);
    case ConstraintClass::EdgeCover: return solve_edge_cover(g);
    case ConstraintClass::Total: return solve_total(g);
    case ConstraintClass::Word: break;
  }
  throw ConfigError("the word model has no alignment graph");
}

/// Largest instance (real source x real target cells) the oracle enumerates.
inline constexpr int kOracleMaxCells = 30;

namespace detail {

struct OracleScore {
  long double cost = std::numeric_limits<long double>::infinity();
  int links = 0;
};

inline bool better(const OracleScore& a, const OracleScore& b) {
  if (!std::isfinite(static_cast<double>(b.cost))) return std::isfinite(static_cast<double>(a.cost));
  if (!std::isfinite(static_cast<double>(a.cost))) return false;
  const long double tol = 1e-12L * std::max<long double>(1, std::fabs(b.cost));
  if (a.cost < b.cost - tol) return true;
  if (a.cost > b.cost + tol) return false;
  return a.links < b.links;
}

inline bool same(const OracleScore& a, const OracleScore& b) { return !better(a, b) && !better(b, a); }

// Exhaustive search over subgraphs in which every "row" picks a set of
// "columns". Rows are the longer side so that column masks stay small.
// `exact_one` restricts choices to single columns (matching) with optional
// padding, otherwise any non-empty column set (edge cover).
class SubsetEnumerator {
 public:
  SubsetEnumerator(const AlignmentGraph& g, bool exact_one)
      : g_(g), exact_one_(exact_one), transpose_(g.n_tgt_real > g.n_src_real) {
    rows_ = transpose_ ? g.n_tgt_real : g.n_src_real;
    cols_ = transpose_ ? g.n_src_real : g.n_tgt_real;
    full_ = (1u << cols_) - 1;
    // Option 0 is padding (matching only); options 1..full_ are column masks.
    suffix_.assign(static_cast<std::size_t>(rows_ + 1) * (full_ + 1), OracleScore{});
    at(rows_, full_) = OracleScore{0, 0};
    for (int r = rows_ - 1; r >= 0; --r)
      for (unsigned mask = 0; mask <= full_; ++mask)
        for (unsigned opt : options()) {
          if (exact_one_ && (mask & opt)) continue;
          auto rest = at(r + 1, mask | opt);
          if (!std::isfinite(static_cast<double>(rest.cost))) continue;
          OracleScore s = step(r, opt);
          s.cost += rest.cost;
          s.links += rest.links;
          if (better(s, at(r, mask))) at(r, mask) = s;
        }
  }

  OracleScore optimum() const { return suffix_[0]; }

  // Cells (source row, target column) of one optimum.
  std::vector<std::pair<int, int>> cells() const {
    std::vector<std::pair<int, int>> out;
    unsigned mask = 0;
    OracleScore prefix{0, 0};
    for (int r = 0; r < rows_; ++r) {
      for (unsigned opt : options()) {
        if (exact_one_ && (mask & opt)) continue;
        auto rest = at(r + 1, mask | opt);
        if (!std::isfinite(static_cast<double>(rest.cost))) continue;
        OracleScore s = step(r, opt);
        OracleScore total{prefix.cost + s.cost + rest.cost, prefix.links + s.links + rest.links};
        if (!same(total, optimum())) continue;
        prefix.cost += s.cost;
        prefix.links += s.links;
        mask |= opt;
        for (int c = 0; c < cols_; ++c)
          if (opt & (1u << c)) out.push_back(transpose_ ? std::pair{c, r} : std::pair{r, c});
        break;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<unsigned> options() const {
    std::vector<unsigned> out;
    if (exact_one_) {
      for (int c = 0; c < cols_; ++c) out.push_back(1u << c);
      if (rows_ > cols_) out.push_back(0);  // padding partner
    } else {
      for (unsigned s = 1; s <= full_; ++s) out.push_back(s);
    }
    return out;
  }

  OracleScore step(int r, unsigned opt) const {
    // Padding partners cost nothing here; their number is fixed and the
    // caller adds it back.
    OracleScore s{0, 0};
    for (int c = 0; c < cols_; ++c) {
      if (!(opt & (1u << c))) continue;
      s.cost += transpose_ ? g_.weights.at(c, r) : g_.weights.at(r, c);
      ++s.links;
    }
    return s;
  }

  OracleScore& at(int r, unsigned mask) { return suffix_[static_cast<std::size_t>(r) * (full_ + 1) + mask]; }
  const OracleScore& at(int r, unsigned mask) const {
    return suffix_[static_cast<std::size_t>(r) * (full_ + 1) + mask];
  }

  const AlignmentGraph& g_;
  bool exact_one_;
  bool transpose_;
  int rows_ = 0;
  int cols_ = 0;
  unsigned full_ = 0;
  std::vector<OracleScore> suffix_;
};

}  // namespace detail

/// Exhaustive optimum over every subgraph of the class, for testing. Matching
/// columns are tracked as used/unused masks, so choices made earlier constrain
/// later ones exactly as in explicit enumeration. Among equal-cost optima the
/// one with fewest links is returned.
inline SemanticAlignment brute_force_optimum(const AlignmentGraph& g, ConstraintClass cls) {
  if (g.n_src_real * g.n_tgt_real > kOracleMaxCells)
    throw OracleRefusal("oracle refuses instances above " + std::to_string(kOracleMaxCells) +
                        " cells");
  if (g.n_src_real == 0 || g.n_tgt_real == 0)
    throw DegenerateInputError("oracle needs two non-empty partitions");
  switch (cls) {
    case ConstraintClass::Perfect:
    case ConstraintClass::EdgeCover: {
      detail::SubsetEnumerator e(g, cls == ConstraintClass::Perfect);
      auto cells = e.cells();
      long double padding = 0;
      if (cls == ConstraintClass::Perfect)
        padding = static_cast<long double>(std::abs(g.n_src_real - g.n_tgt_real)) * g.big();
      return detail::finish(g, {cells.begin(), cells.end()}, cls, padding);
    }
    case ConstraintClass::Total: {
      const int n = g.n_src_real, m = g.n_tgt_real;
      std::vector<int> choice(static_cast<std::size_t>(n), 0), best;
      long double best_cost = std::numeric_limits<long double>::infinity();
      while (true) {
        long double cost = 0;
        for (int i = 0; i < n; ++i) cost += g.weights.at(i, choice[static_cast<std::size_t>(i)]);
        if (cost < best_cost) best_cost = cost, best = choice;
        int k = n - 1;
        while (k >= 0 && ++choice[static_cast<std::size_t>(k)] == m) choice[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) break;
      }
      std::set<std::pair<int, int>> cells;
      for (int i = 0; i < n; ++i) cells.insert({i, best[static_cast<std::size_t>(i)]});
      return detail::finish(g, std::move(cells), cls);
    }
    case ConstraintClass::Word: break;
  }
  throw ConfigError("the word model has no alignment graph");
}

/// TSV dump: one row per source unit, one column per target unit, chosen cells marked `*`.
inline std::string format_graph_tsv(const AlignmentGraph& g, const SemanticAlignment& a) {
  std::set<std::pair<int, int>> chosen;
  for (const auto& l : a.links) chosen.insert({l.src, l.tgt});
  auto unit = [](int id) { return id == kEmptyUnit ? std::string("e") : std::to_string(id); };
  std::string out = "src\\tgt";
  for (int j = 0; j < g.cols(); ++j) out += "\t" + unit(g.weights.tgt_units[static_cast<std::size_t>(j)]);
  out += "\n";
  char buf[64];
  for (int i = 0; i < g.rows(); ++i) {
    out += unit(g.weights.src_units[static_cast<std::size_t>(i)]);
    for (int j = 0; j < g.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "\t%.6f%s", g.weights.at(i, j), chosen.count({i, j}) ? "*" : "");
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace semproj
