#pragma once

// Coupling matrices c(i,j) for logarithmic pair interactions on the sphere,
// plus the structured families they are usually built from: point charges,
// two-component plasmas, graph adjacency and Gaussian random ensembles.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loggas/errors.hpp"
#include "loggas/rational.hpp"
#include "loggas/rng.hpp"

namespace loggas {

/// Symmetric n x n coupling matrix with zero diagonal.
///
/// Always carries double entries. When it was built from rational input it
/// also carries the exact entries, which the critical solver uses for exact
/// tie detection.
class CouplingMatrix {
 public:
  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept { return {entries_.data() + i * n_, n_}; }
  std::span<const double> entries() const noexcept { return entries_; }

  bool is_exact() const noexcept { return exact_.has_value(); }
  const Rational& exact(std::size_t i, std::size_t j) const { return (*exact_)[i * n_ + j]; }
  std::span<const Rational> exact_entries() const { return *exact_; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double x : entries_) m = std::max(m, std::abs(x));
    return m;
  }

  /// Entrywise -C, used for the T+ / T- duality.
  CouplingMatrix negated() const {
    CouplingMatrix out = *this;
    for (double& x : out.entries_) x = -x;
    if (out.exact_)
      for (Rational& q : *out.exact_) q = -q;
    return out;
  }

  /// Entrywise t * C for t > 0.
  CouplingMatrix scaled(double t) const {
    CouplingMatrix out = *this;
    for (double& x : out.entries_) x *= t;
    out.exact_.reset();
    return out;
  }

  CouplingMatrix scaled(const Rational& t) const {
    if (!exact_) return scaled(to_double(t));
    CouplingMatrix out = *this;
    for (std::size_t k = 0; k < out.exact_->size(); ++k) {
      (*out.exact_)[k] *= t;
      out.entries_[k] = to_double((*out.exact_)[k]);
    }
    return out;
  }

  /// Relabels particles: particle i of the result is particle perm[i] of this.
  CouplingMatrix permuted(std::span<const std::size_t> perm) const {
    CouplingMatrix out = *this;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        out.entries_[i * n_ + j] = entries_[perm[i] * n_ + perm[j]];
        if (exact_) (*out.exact_)[i * n_ + j] = (*exact_)[perm[i] * n_ + perm[j]];
      }
    return out;
  }

  /// Drops the rational entries, forcing floating-point mode downstream.
  CouplingMatrix as_float() const {
    CouplingMatrix out = *this;
    out.exact_.reset();
    return out;
  }

  friend bool operator==(const CouplingMatrix& a, const CouplingMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_ && a.exact_ == b.exact_;
  }

  // Builders. Callers go through the free functions below, which validate.
  static CouplingMatrix unchecked(std::size_t n, std::vector<double> entries,
                                  std::optional<std::vector<Rational>> exact = std::nullopt) {
    CouplingMatrix c;
    c.n_ = n;
    c.entries_ = std::move(entries);
    c.exact_ = std::move(exact);
    return c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
  std::optional<std::vector<Rational>> exact_;
};

/// Nonzero point charges k_i; c(i,j) = k_i k_j.
class ChargeVector {
 public:
  explicit ChargeVector(std::vector<double> k) : k_(std::move(k)) { validate(); }

  explicit ChargeVector(std::vector<Rational> k) : exact_(std::move(k)) {
    k_.reserve(exact_->size());
    for (const auto& q : *exact_) k_.push_back(to_double(q));
    for (const auto& q : *exact_)
      if (q == 0) throw Error(ErrorKind::ZeroCharge, "charge vector contains an exact zero");
    validate();
  }

  std::size_t size() const noexcept { return k_.size(); }
  double operator[](std::size_t i) const noexcept { return k_[i]; }
  std::span<const double> values() const noexcept { return k_; }
  bool is_exact() const noexcept { return exact_.has_value(); }
  std::span<const Rational> exact_values() const { return *exact_; }

 private:
  void validate() const {
    if (k_.size() < 2) throw Error(ErrorKind::TooSmall, "need at least two charges");
    for (double x : k_)
      if (x == 0.0) throw Error(ErrorKind::ZeroCharge, "charge vector contains a zero");
  }

  std::vector<double> k_;
  std::optional<std::vector<Rational>> exact_;
};

/// Two species: n1 particles of charge z1 and n2 particles of charge -z2.
struct TwoComponentSpec {
  int n1 = 0;
  int n2 = 0;
  double z1 = 0.0;
  double z2 = 0.0;
  std::optional<Rational> z1_exact;
  std::optional<Rational> z2_exact;

  static TwoComponentSpec make(int n1, int n2, double z1, double z2) {
    TwoComponentSpec s{n1, n2, z1, z2, std::nullopt, std::nullopt};
    s.validate();
    return s;
  }

  static TwoComponentSpec make(int n1, int n2, const Rational& z1, const Rational& z2) {
    TwoComponentSpec s{n1, n2, to_double(z1), to_double(z2), z1, z2};
    s.validate();
    return s;
  }

  int total() const noexcept { return n1 + n2; }

  bool neutral() const {
    if (z1_exact && z2_exact) return *z1_exact * n1 == *z2_exact * n2;
    const double lhs = n1 * z1, rhs = n2 * z2;
    return std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
  }

  void validate() const {
    if (n1 < 1 || n2 < 1) throw Error(ErrorKind::InvalidSpec, "species counts must be positive");
    if (!(z1 > 0.0) || !(z2 > 0.0)) throw Error(ErrorKind::InvalidSpec, "species charges must be positive");
    if ((z1_exact && *z1_exact <= 0) || (z2_exact && *z2_exact <= 0))
      throw Error(ErrorKind::InvalidSpec, "species charges must be positive");
  }
};

/// Simple undirected graph with 0-based vertex labels.
struct GraphSpec {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  static GraphSpec make(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
    GraphSpec g{n, {}};
    g.edges.reserve(edges.size());
    for (auto [i, j] : edges) {
      if (i == j) throw Error(ErrorKind::InvalidSpec, "self-loop at vertex " + std::to_string(i));
      if (i > j) std::swap(i, j);
      if (j >= n) throw Error(ErrorKind::InvalidSpec, "edge endpoint out of range");
      for (auto e : g.edges)
        if (e == std::pair{i, j})
          throw Error(ErrorKind::InvalidSpec,
                      "duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
      g.edges.emplace_back(i, j);
    }
    return g;
  }

  static GraphSpec complete(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return make(n, std::move(e));
  }

  static GraphSpec cycle(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return make(n, std::move(e));
  }

  static GraphSpec path(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return make(n, std::move(e));
  }

  static GraphSpec petersen() {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < 5; ++i) {
      e.emplace_back(i, (i + 1) % 5);          // outer cycle
      e.emplace_back(i, i + 5);                // spokes
      e.emplace_back(i + 5, (i + 2) % 5 + 5);  // inner pentagram
    }
    return make(10, std::move(e));
  }
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace detail {

inline void check_square(std::size_t rows, std::span<const std::size_t> row_lengths) {
  if (rows < 2) throw Error(ErrorKind::TooSmall, "coupling matrix needs n >= 2");
  for (std::size_t len : row_lengths)
    if (len != rows) throw Error(ErrorKind::InvalidInput, "coupling matrix is not square");
}

}  // namespace detail

/// Validates a dense matrix; symmetry is checked, never averaged.
inline CouplingMatrix from_matrix(const std::vector<std::vector<double>>& raw) {
  const std::size_t n = raw.size();
  std::vector<std::size_t> lens;
  for (const auto& r : raw) lens.push_back(r.size());
  detail::check_square(n, lens);

  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i][i] != 0.0) throw Error(ErrorKind::NonzeroDiagonal, "c(" + std::to_string(i) + ",i) != 0");
    for (std::size_t j = 0; j < n; ++j) {
      const double a = raw[i][j], b = raw[j][i];
      if (!std::isfinite(a)) throw Error(ErrorKind::InvalidInput, "non-finite coupling");
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
        throw Error(ErrorKind::AsymmetricInput,
                    "c(" + std::to_string(i) + "," + std::to_string(j) + ") != c(" + std::to_string(j) + "," +
                        std::to_string(i) + ")");
      e[i * n + j] = a;
    }
  }
  // Store one representative so the result is exactly symmetric.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) e[i * n + j] = e[j * n + i];
  return CouplingMatrix::unchecked(n, std::move(e));
}

/// Exact variant: symmetry must hold exactly.
inline CouplingMatrix from_matrix(const std::vector<std::vector<Rational>>& raw) {
  const std::size_t n = raw.size();
  std::vector<std::size_t> lens;
  for (const auto& r : raw) lens.push_back(r.size());
  detail::check_square(n, lens);

  std::vector<double> e(n * n);
  std::vector<Rational> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i][i] != 0) throw Error(ErrorKind::NonzeroDiagonal, "c(" + std::to_string(i) + ",i) != 0");
    for (std::size_t j = 0; j < n; ++j) {
      if (raw[i][j] != raw[j][i])
        throw Error(ErrorKind::AsymmetricInput,
                    "c(" + std::to_string(i) + "," + std::to_string(j) + ") != c(" + std::to_string(j) + "," +
                        std::to_string(i) + ")");
      q[i * n + j] = raw[i][j];
      e[i * n + j] = to_double(raw[i][j]);
    }
  }
  return CouplingMatrix::unchecked(n, std::move(e), std::move(q));
}

inline CouplingMatrix from_charges(const ChargeVector& k) {
  const std::size_t n = k.size();
  std::vector<double> e(n * n, 0.0);
  std::optional<std::vector<Rational>> q;
  if (k.is_exact()) q.emplace(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (q) {
        (*q)[i * n + j] = k.exact_values()[i] * k.exact_values()[j];
        e[i * n + j] = to_double((*q)[i * n + j]);
      } else {
        e[i * n + j] = k[i] * k[j];
      }
    }
  return CouplingMatrix::unchecked(n, std::move(e), std::move(q));
}

/// Charge vector (z1,...,z1,-z2,...,-z2) of a two-component system.
inline ChargeVector charges_of(const TwoComponentSpec& s) {
  s.validate();
  if (s.z1_exact && s.z2_exact) {
    std::vector<Rational> k(s.n1, *s.z1_exact);
    k.insert(k.end(), s.n2, -*s.z2_exact);
    return ChargeVector(std::move(k));
  }
  std::vector<double> k(s.n1, s.z1);
  k.insert(k.end(), s.n2, -s.z2);
  return ChargeVector(std::move(k));
}

/// Block matrix: z1^2 inside species 1, z2^2 inside species 2, -z1 z2 across.
inline CouplingMatrix from_two_component(const TwoComponentSpec& s) { return from_charges(charges_of(s)); }

inline CouplingMatrix from_graph(const GraphSpec& g) {
  if (g.n < 2) throw Error(ErrorKind::TooSmall, "graph needs at least two vertices");
  const std::size_t n = g.n;
  std::vector<double> e(n * n, 0.0);
  std::vector<Rational> q(n * n);
  for (auto [i, j] : g.edges) {
    if (i >= n || j >= n || i == j) throw Error(ErrorKind::InvalidSpec, "bad edge");
    e[i * n + j] = e[j * n + i] = 1.0;
    q[i * n + j] = q[j * n + i] = 1;
  }
  return CouplingMatrix::unchecked(n, std::move(e), std::move(q));
}

/// i.i.d. N(0, variance) off-diagonal couplings, upper triangle drawn row by row.
inline CouplingMatrix sample_gaussian_couplings(std::size_t n, double variance, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::TooSmall, "need n >= 2");
  if (!(variance > 0.0)) throw Error(ErrorKind::InvalidSpec, "variance must be positive");
  CounterRng rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = e[j * n + i] = normal(rng);
  return CouplingMatrix::unchecked(n, std::move(e));
}

/// i.i.d. standard normal charges; exact zeros are redrawn.
inline ChargeVector sample_gaussian_charges(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::TooSmall, "need n >= 2");
  CounterRng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> k(n);
  for (double& x : k) {
    do {
      x = normal(rng);
    } while (x == 0.0);
  }
  return ChargeVector(std::move(k));
}

}  // namespace loggas
