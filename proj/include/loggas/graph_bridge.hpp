#pragma once

// Cross-checks of the subset-ratio solver against two other problems:
// graph arboricity (with adjacency couplings, -T- is the fractional
// arboricity max_H |E(H)|/(|V(H)|-1)) and the {0,1}-spin
// Sherrington-Kirkpatrick ground state with external field T-.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "loggas/critical_solver.hpp"
#include "loggas/errors.hpp"
#include "loggas/rational.hpp"

namespace loggas {

struct ArboricityReport {
  Rational fractional;
  int arboricity = 0;
  SubsetMask witness;
};

inline ArboricityReport arboricity(const GraphSpec& g, const SolverOptions& base = {}) {
  if (g.edges.empty()) throw Error(ErrorKind::EdgelessGraph, "graph has no edges");
  SolverOptions opts = base;
  opts.mode = ArithmeticMode::exact;
  const OptResult r = solve_t_minus(from_graph(g), opts);
  ArboricityReport out;
  out.fractional = -*r.t_exact;
  const BigInt& num = numerator(out.fractional);
  const BigInt& den = denominator(out.fractional);
  out.arboricity = static_cast<int>((num + den - 1) / den);
  out.witness = r.optimizers.front();
  return out;
}

namespace detail {

/// Union-find with rollback (union by size, no path compression).
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  /// Joins the classes of a and b; false if already joined (edge closes a cycle).
  bool unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  void undo() {
    const std::size_t b = history_.back();
    history_.pop_back();
    size_[parent_[b]] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> history_;
};

inline bool color_edges(const GraphSpec& g, std::size_t e, int colors, int used, std::vector<RollbackUnionFind>& forests) {
  if (e == g.edges.size()) return true;
  const auto [u, v] = g.edges[e];
  // Colors are interchangeable: edge e may open at most one new color.
  const int limit = std::min(colors, used + 1);
  for (int k = 0; k < limit; ++k) {
    if (!forests[static_cast<std::size_t>(k)].unite(u, v)) continue;
    if (color_edges(g, e + 1, colors, std::max(used, k + 1), forests)) return true;
    forests[static_cast<std::size_t>(k)].undo();
  }
  return false;
}

}  // namespace detail

/// Minimal number of forests partitioning the edge set, by exhaustive search
/// over edge colorings with one union-find per color.
inline int forest_partition_oracle(const GraphSpec& g) {
  if (g.n > 10 || g.edges.size() > 20)
    throw Error(ErrorKind::InstanceTooLarge, "forest oracle is limited to n <= 10, |E| <= 20");
  if (g.edges.empty()) return 0;
  for (int k = 1;; ++k) {
    std::vector<detail::RollbackUnionFind> forests(static_cast<std::size_t>(k), detail::RollbackUnionFind(g.n));
    if (detail::color_edges(g, 0, k, 0, forests)) return k;
  }
}

/// max over all (not necessarily induced) edge subsets F of |F| / (|V(F)| - 1).
inline Rational fractional_arboricity_all_subgraphs(const GraphSpec& g) {
  if (g.n > 6) throw Error(ErrorKind::InstanceTooLarge, "subgraph brute force is limited to n <= 6");
  const std::size_t m = g.edges.size();
  Rational best = 0;
  for (std::uint32_t f = 1; f < (1u << m); ++f) {
    std::uint32_t verts = 0;
    for (std::size_t e = 0; e < m; ++e)
      if (f >> e & 1u) verts |= (1u << g.edges[e].first) | (1u << g.edges[e].second);
    const Rational ratio(std::popcount(f), std::popcount(verts) - 1);
    best = std::max(best, ratio);
  }
  return best;
}

/// Checks the {0,1}-spin ground-state identity: over x in {0,1}^N with
/// sum(x) >= 2, min of  -1/2 x^T C x - T- sum(x)  equals -T-, and the
/// minimizers are exactly G-. When T- = 0 the minimizers are zero-sum subsets,
/// which G- excludes by convention, so only the value is compared.
inline bool sk_ground_state_check(const CouplingMatrix& c, const SolverOptions& opts = {}) {
  const std::size_t n = c.size();
  if (n > 16) throw Error(ErrorKind::InstanceTooLarge, "SK check is limited to n <= 16");
  const OptResult tm = solve_t_minus(c, opts);
  const std::uint32_t total = 1u << n;
  std::vector<SubsetMask> argmin;

  if (tm.t_exact) {
    const Rational& t = *tm.t_exact;
    std::optional<Rational> best;
    for (std::uint32_t m = 0; m < total; ++m) {
      const SubsetMask s(m);
      if (s.size() < 2) continue;
      const Rational value = -subset_sum_exact(c, s) - t * s.size();  // subset sum = 1/2 x^T C x
      if (!best || value < *best) {
        best = value;
        argmin.clear();
      }
      if (value == *best) argmin.push_back(s);
    }
    if (*best != -t) return false;
    if (t == 0) return true;
  } else {
    const double t = tm.t_value;
    const double tol = opts.tie_tolerance * std::max(1.0, std::abs(t)) * static_cast<double>(n);
    std::vector<std::pair<SubsetMask, double>> values;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t m = 0; m < total; ++m) {
      const SubsetMask s(m);
      if (s.size() < 2) continue;
      const double value = -detail::scratch_sum(c, s).first - t * s.size();
      values.emplace_back(s, value);
      best = std::min(best, value);
    }
    if (std::abs(best + t) > tol) return false;
    if (t == 0.0) return true;
    for (const auto& [s, v] : values)
      if (std::abs(v - best) <= tol) argmin.push_back(s);
  }
  std::vector<SubsetMask> expect = tm.optimizers;
  std::sort(argmin.begin(), argmin.end());
  std::sort(expect.begin(), expect.end());
  return argmin == expect;
}

}  // namespace loggas
