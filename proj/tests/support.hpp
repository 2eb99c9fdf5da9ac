#pragma once

// Hand-rolled generators for property tests.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "loggas/loggas.hpp"

namespace testgen {

using loggas::CounterRng;
using loggas::Rational;

inline int uniform_int(CounterRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Symmetric matrix with small mixed-sign integer entries (exact), allowing zeros.
inline loggas::CouplingMatrix random_integer_matrix(CounterRng& rng, std::size_t n, int range = 5) {
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = uniform_int(rng, -range, range);
  return loggas::from_matrix(m);
}

/// Mixed-sign rational entries p/q with small q, producing frequent exact ties.
inline loggas::CouplingMatrix random_rational_matrix(CounterRng& rng, std::size_t n) {
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = Rational(uniform_int(rng, -6, 6), uniform_int(rng, 1, 3));
  return loggas::from_matrix(m);
}

/// Float matrix with entries uniform in [-1, 1].
inline loggas::CouplingMatrix random_float_matrix(CounterRng& rng, std::size_t n) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = 2.0 * rng.uniform() - 1.0;
  return loggas::from_matrix(m);
}

inline std::vector<std::size_t> random_permutation(CounterRng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
  return p;
}

/// Random connected graph: a random spanning tree plus extra edges.
inline loggas::GraphSpec random_connected_graph(CounterRng& rng, std::size_t n, double extra) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  auto add = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    if (a == b || has[a][b]) return;
    has[a][b] = true;
    edges.emplace_back(a, b);
  };
  const auto order = random_permutation(rng, n);
  for (std::size_t i = 1; i < n; ++i) add(order[i], order[rng() % i]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng.uniform() < extra) add(a, b);
  return loggas::GraphSpec::make(n, edges);
}

inline loggas::GraphSpec random_tree(CounterRng& rng, std::size_t n) { return random_connected_graph(rng, n, 0.0); }

/// Charges passing both variation conditions: magnitudes in [1, 1.45) per sign class.
inline loggas::ChargeVector random_onsager_charges(CounterRng& rng, std::size_t n) {
  std::vector<double> k(n);
  const std::size_t pos = 1 + rng() % (n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = 1.0 + 0.45 * rng.uniform();
    k[i] = i < pos ? mag : -mag;
  }
  return loggas::ChargeVector(k);
}

inline std::vector<loggas::SubsetMask> sorted(std::vector<loggas::SubsetMask> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace testgen
