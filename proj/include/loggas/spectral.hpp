#pragma once

// Eigenvalue bounds on the critical inverse temperatures:
//   beta+ >= -1/lambda_min(C),  beta- <= -1/lambda_max(C),
// and their closed forms for charge couplings c(i,j) = k_i k_j:
//   beta+ >= 1/max k_i^2,       beta- <= -1/(sum k_i^2 - min k_i^2).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "loggas/coupling.hpp"
#include "loggas/errors.hpp"

namespace loggas {

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  /// Column k of `vectors` (row-major n x n) is the unit eigenvector of eigenvalues[k].
  std::vector<double> vectors;
  /// max_k || C v_k - lambda_k v_k ||_inf
  double residual = 0.0;
  int sweeps = 0;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

inline constexpr int kMaxJacobiSweeps = 100;
inline constexpr std::size_t kMaxEigenSize = 2048;

/// Full spectrum of the symmetric coupling matrix by cyclic Jacobi rotations,
/// until the off-diagonal Frobenius norm drops below 1e-12 ||C||_F.
inline Spectrum symmetric_eigs(std::span<const double> entries, std::size_t n) {
  if (n > kMaxEigenSize) throw Error(ErrorKind::InstanceTooLarge, "eigensolver limited to n <= 2048");
  std::vector<double> a(entries.begin(), entries.end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a[i * n + j] * a[i * n + j];
    return s;
  };
  double total2 = 0.0;
  for (double x : a) total2 += x * x;
  const double target2 = 1e-24 * total2;

  Spectrum out;
  int sweep = 0;
  for (; off_norm2() > target2; ++sweep) {
    if (sweep >= kMaxJacobiSweeps) throw Error(ErrorKind::NoConvergence, "Jacobi sweep cap exceeded");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        // Rotation angle zeroing a(p,q): t = tan(theta), the smaller root.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = cs * akp - sn * akq;
          a[k * n + q] = sn * akp + cs * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = cs * apk - sn * aqk;
          a[q * n + k] = sn * apk + cs * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = cs * vkp - sn * vkq;
          v[k * n + q] = sn * vkp + cs * vkq;
        }
      }
    }
  }
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  out.eigenvalues.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double cv = 0.0;
      for (std::size_t j = 0; j < n; ++j) cv += entries[i * n + j] * out.vectors[j * n + k];
      out.residual = std::max(out.residual, std::abs(cv - out.eigenvalues[k] * out.vectors[i * n + k]));
    }
  }
  return out;
}

inline Spectrum symmetric_eigs(const CouplingMatrix& c) { return symmetric_eigs(c.entries(), c.size()); }

enum class BoundSource { eigenvalue, charge_formula };

inline const char* to_string(BoundSource s) { return s == BoundSource::eigenvalue ? "eigenvalue" : "charge_formula"; }

/// beta+ >= beta_plus_lower (when beta+ is finite), beta- <= beta_minus_upper
/// (when beta- is finite). Vacuous bounds are +inf / -inf.
struct BoundReport {
  double beta_plus_lower = std::numeric_limits<double>::infinity();
  double beta_minus_upper = -std::numeric_limits<double>::infinity();
  BoundSource source = BoundSource::eigenvalue;
  /// The quantity inverted: -lambda_min / lambda_max, or max k^2 / (sum k^2 - min k^2).
  double t_plus_upper = 0.0;
  double t_minus_lower = 0.0;
};

inline BoundReport eig_bounds(const Spectrum& s) {
  BoundReport b;
  b.source = BoundSource::eigenvalue;
  b.t_plus_upper = -s.min();
  b.t_minus_lower = -s.max();
  if (s.min() < 0.0) b.beta_plus_lower = -1.0 / s.min();
  if (s.max() > 0.0) b.beta_minus_upper = -1.0 / s.max();
  return b;
}

inline BoundReport eig_bounds(const CouplingMatrix& c) { return eig_bounds(symmetric_eigs(c)); }

inline BoundReport charge_bounds(const ChargeVector& k) {
  double max_sq = 0.0, min_sq = std::numeric_limits<double>::infinity(), sum_sq = 0.0;
  for (double x : k.values()) {
    const double s = x * x;
    max_sq = std::max(max_sq, s);
    min_sq = std::min(min_sq, s);
    sum_sq += s;
  }
  BoundReport b;
  b.source = BoundSource::charge_formula;
  b.t_plus_upper = max_sq;
  b.t_minus_lower = -(sum_sq - min_sq);
  b.beta_plus_lower = 1.0 / max_sq;
  b.beta_minus_upper = -1.0 / (sum_sq - min_sq);
  return b;
}

}  // namespace loggas
