#pragma once

// Exact solution of the two subset-ratio problems
//
//   T+ = -min_S  sum_{i<j in S} c(i,j) / (|S| - 1)
//   T- = -max_S  sum_{i<j in S} c(i,j) / (|S| - 1)
//
// over all S with |S| >= 2, and the critical inverse temperatures
// beta+ = 1/T+ (T+ > 0, else +inf), beta- = 1/T- (T- < 0, else -inf) that
// bound the interval on which the partition function is finite.
//
// The main solver walks all 2^n subsets in Gray-code order, updating the
// subset sum in O(n) per step. The mask range is split into fixed chunks that
// are processed independently and merged in order, so the result does not
// depend on the worker count. Rational input is solved exactly: entries are
// brought to a common denominator and the walk runs on integers.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "loggas/coupling.hpp"
#include "loggas/errors.hpp"
#include "loggas/nest.hpp"
#include "loggas/parallel.hpp"
#include "loggas/rational.hpp"
#include "loggas/subset.hpp"

namespace loggas {

enum class ArithmeticMode { automatic, exact, floating };

struct SolverOptions {
  ArithmeticMode mode = ArithmeticMode::automatic;
  /// Float mode: S joins the optimizer family when |ratio - T| <= tol * max(1, |T|).
  double tie_tolerance = 1e-9;
  std::size_t max_particles = 26;
  unsigned threads = 0;
  std::size_t max_optimizers = std::size_t{1} << 20;
};

/// Solution of one side (T+ or T-).
struct OptResult {
  double t_value = 0.0;
  std::optional<Rational> t_exact;
  /// All nonzero-sum subsets attaining the optimum, canonical order.
  std::vector<SubsetMask> optimizers;
  /// True when the corresponding endpoint beta is finite (T+ > 0, T- < 0).
  bool attained = false;
  /// True when more than max_optimizers subsets tie.
  bool truncated = false;
};

// ---------------------------------------------------------------------------
// Per-subset quantities
// ---------------------------------------------------------------------------

inline void check_subset(const CouplingMatrix& c, SubsetMask s) {
  if (s.size() < 2) throw Error(ErrorKind::InvalidInput, "subset " + s.label() + " has fewer than two members");
  if (c.size() < 32 && (s.bits() >> c.size()) != 0)
    throw Error(ErrorKind::InvalidInput, "subset " + s.label() + " exceeds particle count");
}

/// sum_{i<j in S} c(i,j), pairs added in ascending (i, j) order.
inline double subset_sum(const CouplingMatrix& c, SubsetMask s) {
  check_subset(c, s);
  const auto m = s.members();
  double sum = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b) sum += c(m[a], m[b]);
  return sum;
}

inline Rational subset_sum_exact(const CouplingMatrix& c, SubsetMask s) {
  check_subset(c, s);
  if (!c.is_exact()) throw Error(ErrorKind::InvalidInput, "coupling matrix has no exact entries");
  const auto m = s.members();
  Rational sum = 0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b) sum += c.exact(m[a], m[b]);
  return sum;
}

/// Finiteness condition contributed by one subset: beta * a_S + 1 + b_S > 0
/// with a_S the subset sum and b_S = |S| - 2.
struct SubsetConstraint {
  enum class Kind { none, lower, upper };

  double a = 0.0;
  std::optional<Rational> a_exact;
  int b = 0;
  Kind kind = Kind::none;
  /// beta > bound (lower) or beta < bound (upper); bound = -(|S|-1)/a_S.
  double bound = 0.0;
  std::optional<Rational> bound_exact;

  bool admits(double beta) const { return beta * a + (b + 1) > 0.0; }
};

inline SubsetConstraint subset_constraint(const CouplingMatrix& c, SubsetMask s) {
  SubsetConstraint k;
  k.b = s.size() - 2;
  const int dim = s.size() - 1;
  if (c.is_exact()) {
    k.a_exact = subset_sum_exact(c, s);
    k.a = to_double(*k.a_exact);
    if (*k.a_exact != 0) {
      k.bound_exact = Rational(-dim) / *k.a_exact;
      k.bound = to_double(*k.bound_exact);
      k.kind = *k.a_exact > 0 ? SubsetConstraint::Kind::lower : SubsetConstraint::Kind::upper;
    }
  } else {
    k.a = subset_sum(c, s);
    if (k.a != 0.0) {
      k.bound = -dim / k.a;
      k.kind = k.a > 0.0 ? SubsetConstraint::Kind::lower : SubsetConstraint::Kind::upper;
    }
  }
  return k;
}

// ---------------------------------------------------------------------------
// Gray-code walk
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kResyncPeriod = 1024;

/// Fixed chunk length for a 2^n walk: a power of two >= kResyncPeriod giving
/// at most 256 chunks.
inline std::uint64_t chunk_length(std::size_t n) {
  const std::uint64_t total = std::uint64_t{1} << n;
  return std::max<std::uint64_t>(kResyncPeriod, total >> 8);
}

/// Visits masks gray(lo) .. gray(hi - 1), maintaining r[j] = sum_{i in S} c(i,j)
/// and the subset sum. With `resync` the state is recomputed from scratch at
/// every index divisible by kResyncPeriod (bounds float drift).
template <class T, class Visit>
void gray_walk(const std::vector<T>& c, std::size_t n, std::uint64_t lo, std::uint64_t hi, bool resync,
               Visit&& visit) {
  std::vector<T> r(n);
  T sum{};
  std::uint32_t mask = static_cast<std::uint32_t>(lo ^ (lo >> 1));
  auto rebuild = [&] {
    sum = T{};
    for (std::size_t j = 0; j < n; ++j) {
      r[j] = T{};
      for (std::uint32_t b = mask; b; b &= b - 1) r[j] += c[static_cast<std::size_t>(std::countr_zero(b)) * n + j];
    }
    for (std::uint32_t b = mask; b; b &= b - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(b));
      for (std::uint32_t b2 = b & (b - 1); b2; b2 &= b2 - 1) sum += c[i * n + std::countr_zero(b2)];
    }
  };
  rebuild();
  visit(mask, sum);
  for (std::uint64_t i = lo + 1; i < hi; ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i));
    const T* row = &c[bit * n];
    mask ^= std::uint32_t{1} << bit;
    if (resync && i % kResyncPeriod == 0) {
      rebuild();
    } else if (mask >> bit & 1u) {
      sum += r[bit];
      for (std::size_t j = 0; j < n; ++j) r[j] += row[j];
    } else {
      for (std::size_t j = 0; j < n; ++j) r[j] -= row[j];
      sum -= r[bit];
    }
    visit(mask, sum);
  }
}

// -- exact (integer) sides ---------------------------------------------------

template <class Int>
struct ExactSide {
  bool has = false;
  Int sum{};
  int size = 0;
  std::vector<std::uint32_t> cands;
  bool truncated = false;
};

template <class Int>
struct WideOf {
  using type = Int;
};
template <>
struct WideOf<std::int64_t> {
  using type = __int128;
};

/// Sign of a_sum/(a_size-1) - b_sum/(b_size-1).
template <class Int>
int compare_ratio(const Int& a_sum, int a_size, const Int& b_sum, int b_size) {
  using Wide = typename WideOf<Int>::type;
  const Wide lhs = static_cast<Wide>(a_sum) * (b_size - 1);
  const Wide rhs = static_cast<Wide>(b_sum) * (a_size - 1);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

template <class Int>
struct ExactChunk {
  ExactSide<Int> lo;  // minimum ratio (T+ side)
  ExactSide<Int> hi;  // maximum ratio (T- side)
};

template <class Int>
void exact_offer(ExactSide<Int>& side, int sign, std::uint32_t mask, const Int& sum, int size, std::size_t cap) {
  // sign = -1 keeps the minimum, +1 the maximum.
  const int cmp = side.has ? compare_ratio(sum, size, side.sum, side.size) * sign : 1;
  if (cmp > 0) {
    side.has = true;
    side.sum = sum;
    side.size = size;
    side.cands.clear();
    side.truncated = false;
    if (sum != 0) side.cands.push_back(mask);
  } else if (cmp == 0 && sum != 0) {
    if (side.cands.size() < cap)
      side.cands.push_back(mask);
    else
      side.truncated = true;
  }
}

struct ExactSolution {
  OptResult plus;
  OptResult minus;
};

template <class Int>
ExactSolution solve_exact_with(const std::vector<Int>& scaled, const Rational& denom, std::size_t n,
                               const SolverOptions& opts) {
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t len = std::min(total, chunk_length(n));
  const std::size_t chunks = static_cast<std::size_t>(total / len);
  std::vector<ExactChunk<Int>> parts(chunks);
  parallel_for(chunks, worker_count(opts.threads), [&](std::size_t k) {
    auto& part = parts[k];
    gray_walk(scaled, n, k * len, (k + 1) * len, false, [&](std::uint32_t mask, const Int& sum) {
      const int size = std::popcount(mask);
      if (size < 2) return;
      exact_offer(part.lo, -1, mask, sum, size, opts.max_optimizers);
      exact_offer(part.hi, +1, mask, sum, size, opts.max_optimizers);
    });
  });

  auto merge = [&](auto pick, int sign) {
    ExactSide<Int> best;
    for (auto& part : parts) {
      const ExactSide<Int>& s = pick(part);
      if (!s.has) continue;
      const int cmp = best.has ? compare_ratio(s.sum, s.size, best.sum, best.size) * sign : 1;
      if (cmp > 0) {
        best = s;
      } else if (cmp == 0) {
        best.truncated = best.truncated || s.truncated;
        for (auto m : s.cands) {
          if (best.cands.size() < opts.max_optimizers)
            best.cands.push_back(m);
          else
            best.truncated = true;
        }
      }
    }
    OptResult out;
    const Rational ratio = Rational(static_cast<BigInt>(best.sum), BigInt(best.size - 1)) / denom;
    out.t_exact = -ratio;
    out.t_value = to_double(*out.t_exact);
    out.truncated = best.truncated;
    for (auto m : best.cands) out.optimizers.emplace_back(m);
    std::sort(out.optimizers.begin(), out.optimizers.end(), canonical_less);
    return out;
  };
  ExactSolution sol;
  sol.plus = merge([](auto& p) -> auto& { return p.lo; }, -1);
  sol.minus = merge([](auto& p) -> auto& { return p.hi; }, +1);
  return sol;
}

inline ExactSolution solve_exact(const CouplingMatrix& c, const SolverOptions& opts) {
  const std::size_t n = c.size();
  BigInt denom = 1;
  for (const auto& q : c.exact_entries()) denom = boost::multiprecision::lcm(denom, denominator(q));
  std::vector<BigInt> big(n * n);
  BigInt max_abs = 0;
  for (std::size_t k = 0; k < n * n; ++k) {
    const Rational& q = c.exact_entries()[k];
    big[k] = numerator(q) * (denom / denominator(q));
    max_abs = std::max<BigInt>(max_abs, abs(big[k]));
  }
  // int64 sums with __int128 cross products when every subset sum fits.
  const BigInt pair_count = BigInt(n * (n - 1) / 2);
  if (max_abs * pair_count < (BigInt(1) << 62)) {
    std::vector<std::int64_t> small(n * n);
    for (std::size_t k = 0; k < n * n; ++k) small[k] = static_cast<std::int64_t>(big[k]);
    return solve_exact_with(small, Rational(denom), n, opts);
  }
  return solve_exact_with(big, Rational(denom), n, opts);
}

// -- floating-point sides ------------------------------------------------------

struct FloatSide {
  bool has = false;
  double best = 0.0;
  std::uint32_t best_mask = 0;
  std::vector<std::pair<std::uint32_t, double>> cands;
  std::size_t prune_at = 64;
  bool truncated = false;
};

inline double tie_width(double t, double tol) { return tol * std::max(1.0, std::abs(t)); }

inline void float_offer(FloatSide& side, int sign, std::uint32_t mask, double ratio, bool zero, double tol,
                        std::size_t cap) {
  // Collect with a wider window than the final tie test; the final family is
  // re-derived from scratch sums.
  const double width = 4.0 * tie_width(side.best, tol);
  if (!side.has || (ratio - side.best) * sign > 0.0) {
    side.has = true;
    side.best = ratio;
    side.best_mask = mask;
    if (side.cands.size() >= side.prune_at) {
      const double w = 4.0 * tie_width(ratio, tol);
      std::erase_if(side.cands, [&](const auto& e) { return (ratio - e.second) * sign > w; });
      side.prune_at = std::max<std::size_t>(64, 2 * side.cands.size());
    }
  } else if ((side.best - ratio) * sign > width) {
    return;
  }
  if (zero) return;
  if (side.cands.size() >= cap) {
    const double w = 4.0 * tie_width(side.best, tol);
    std::erase_if(side.cands, [&](const auto& e) { return (side.best - e.second) * sign > w; });
  }
  if (side.cands.size() < cap)
    side.cands.emplace_back(mask, ratio);
  else
    side.truncated = true;
}

struct FloatChunk {
  FloatSide lo;
  FloatSide hi;
};

/// Sum over S from scratch with the magnitude of its terms.
inline std::pair<double, double> scratch_sum(const CouplingMatrix& c, SubsetMask s) {
  const auto m = s.members();
  double sum = 0.0, mag = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      sum += c(m[a], m[b]);
      mag += std::abs(c(m[a], m[b]));
    }
  return {sum, mag};
}

struct ScratchRatio {
  double ratio;
  bool zero;
};

inline ScratchRatio scratch_ratio(const CouplingMatrix& c, SubsetMask s) {
  const auto [sum, mag] = scratch_sum(c, s);
  if (std::abs(sum) <= 1e-12 * mag) return {0.0, true};
  return {sum / (s.size() - 1), false};
}

inline ExactSolution solve_float(const CouplingMatrix& c, const SolverOptions& opts) {
  const std::size_t n = c.size();
  const std::vector<double> entries(c.entries().begin(), c.entries().end());
  const double zero_eps = 1e-10 * c.max_abs() * static_cast<double>(n * n);
  std::vector<double> inv(n + 1, 0.0);
  for (std::size_t k = 2; k <= n; ++k) inv[k] = 1.0 / static_cast<double>(k - 1);

  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t len = std::min(total, chunk_length(n));
  const std::size_t chunks = static_cast<std::size_t>(total / len);
  std::vector<FloatChunk> parts(chunks);
  const double tol = opts.tie_tolerance;
  parallel_for(chunks, worker_count(opts.threads), [&](std::size_t k) {
    auto& part = parts[k];
    gray_walk(entries, n, k * len, (k + 1) * len, true, [&](std::uint32_t mask, double sum) {
      const int size = std::popcount(mask);
      if (size < 2) return;
      const bool zero = std::abs(sum) <= zero_eps;
      const double ratio = zero ? 0.0 : sum * inv[static_cast<std::size_t>(size)];
      float_offer(part.lo, -1, mask, ratio, zero, tol, opts.max_optimizers);
      float_offer(part.hi, +1, mask, ratio, zero, tol, opts.max_optimizers);
    });
  });

  auto merge = [&](auto pick, int sign) {
    std::vector<std::uint32_t> pool;
    bool truncated = false;
    for (auto& part : parts) {
      const FloatSide& s = pick(part);
      if (!s.has) continue;
      pool.push_back(s.best_mask);
      for (const auto& e : s.cands) pool.push_back(e.first);
      truncated = truncated || s.truncated;
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::vector<std::pair<SubsetMask, ScratchRatio>> scored;
    scored.reserve(pool.size());
    double best = 0.0;
    bool has = false;
    for (auto m : pool) {
      const ScratchRatio r = scratch_ratio(c, SubsetMask(m));
      scored.emplace_back(SubsetMask(m), r);
      if (!has || (r.ratio - best) * sign > 0.0) best = r.ratio, has = true;
    }
    OptResult out;
    out.t_value = best == 0.0 ? 0.0 : -best;
    out.truncated = truncated;
    if (best != 0.0) {
      const double w = tie_width(best, tol);
      for (const auto& [m, r] : scored)
        if (!r.zero && std::abs(r.ratio - best) <= w) out.optimizers.push_back(m);
    }
    if (out.optimizers.size() > opts.max_optimizers) {
      out.optimizers.resize(opts.max_optimizers);
      out.truncated = true;
    }
    std::sort(out.optimizers.begin(), out.optimizers.end(), canonical_less);
    return out;
  };
  ExactSolution sol;
  sol.plus = merge([](auto& p) -> auto& { return p.lo; }, -1);
  sol.minus = merge([](auto& p) -> auto& { return p.hi; }, +1);
  return sol;
}

inline bool use_exact(const CouplingMatrix& c, const SolverOptions& opts) {
  switch (opts.mode) {
    case ArithmeticMode::exact:
      if (!c.is_exact()) throw Error(ErrorKind::InvalidInput, "exact mode requires rational coupling input");
      return true;
    case ArithmeticMode::floating:
      return false;
    case ArithmeticMode::automatic:
      break;
  }
  return c.is_exact();
}

inline void check_limits(const CouplingMatrix& c, const SolverOptions& opts) {
  const std::size_t limit = std::min<std::size_t>(opts.max_particles, 31);
  if (c.size() > limit)
    throw Error(ErrorKind::InstanceTooLarge,
                "n = " + std::to_string(c.size()) + " exceeds the solver limit " + std::to_string(limit));
  if (!(opts.tie_tolerance > 0.0)) throw Error(ErrorKind::InvalidInput, "tie tolerance must be positive");
}

inline ExactSolution solve_both(const CouplingMatrix& c, const SolverOptions& opts) {
  check_limits(c, opts);
  ExactSolution sol = use_exact(c, opts) ? solve_exact(c, opts) : solve_float(c, opts);
  sol.plus.attained = sol.plus.t_value > 0.0;
  sol.minus.attained = sol.minus.t_value < 0.0;
  return sol;
}

}  // namespace detail

/// T+ and the family G+ of minimizing subsets.
inline OptResult solve_t_plus(const CouplingMatrix& c, const SolverOptions& opts = {}) {
  return detail::solve_both(c, opts).plus;
}

/// T- and the family G- of maximizing subsets.
inline OptResult solve_t_minus(const CouplingMatrix& c, const SolverOptions& opts = {}) {
  return detail::solve_both(c, opts).minus;
}

// ---------------------------------------------------------------------------
// Critical report
// ---------------------------------------------------------------------------

enum class NestStatus { ok, not_critical, family_too_large };

inline const char* to_string(NestStatus s) {
  switch (s) {
    case NestStatus::ok: return "ok";
    case NestStatus::not_critical: return "not_critical";
    case NestStatus::family_too_large: return "family_too_large";
  }
  return "?";
}

struct CriticalSide {
  OptResult opt;
  double beta = 0.0;  // +-inf when the endpoint is not finite
  std::optional<Rational> beta_exact;
  bool finite = false;
  /// Maximal nest size (pole order); 0 for an infinite endpoint, empty when
  /// the optimizer family was too large to search.
  std::optional<int> kappa;
  std::vector<Nest> max_nests;
  bool nests_truncated = false;
  NestStatus nest_status = NestStatus::not_critical;
  SupportDescription support;
};

struct CriticalReport {
  std::size_t n = 0;
  bool exact = false;
  CriticalSide plus;
  CriticalSide minus;

  /// Both endpoints infinite (T+ <= 0 and T- >= 0).
  bool degenerate() const { return !plus.finite && !minus.finite; }
};

/// Support of the limiting measure at a finite endpoint.
inline SupportDescription limit_support(const OptResult& side, const NestSearchResult& nests) {
  if (!side.attained) throw Error(ErrorKind::NotCritical, "endpoint is infinite on this side");
  return describe_support(nests);
}

namespace detail {

inline CriticalSide make_side(OptResult opt, bool plus) {
  CriticalSide s;
  s.finite = opt.attained;
  if (s.finite) {
    s.beta = 1.0 / opt.t_value;
    if (opt.t_exact) {
      s.beta_exact = Rational(1) / *opt.t_exact;
      s.beta = to_double(*s.beta_exact);
    }
    try {
      NestSearchResult nests = max_nest(opt.optimizers);
      s.kappa = nests.kappa;
      s.max_nests = nests.nests;
      s.nests_truncated = nests.truncated;
      s.support = limit_support(opt, nests);
      s.nest_status = NestStatus::ok;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FamilyTooLarge) throw;
      s.kappa.reset();
      s.nest_status = NestStatus::family_too_large;
    }
  } else {
    s.beta = plus ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    s.kappa = 0;
  }
  s.opt = std::move(opt);
  return s;
}

}  // namespace detail

/// Finiteness interval (beta-, beta+) with optimizer families, pole orders and
/// limiting supports on each finite side.
inline CriticalReport critical_interval(const CouplingMatrix& c, const SolverOptions& opts = {}) {
  auto sol = detail::solve_both(c, opts);
  CriticalReport r;
  r.n = c.size();
  r.exact = sol.plus.t_exact.has_value();
  r.plus = detail::make_side(std::move(sol.plus), true);
  r.minus = detail::make_side(std::move(sol.minus), false);
  return r;
}

// ---------------------------------------------------------------------------
// Reference oracle
// ---------------------------------------------------------------------------

struct OracleResult {
  double t_plus = 0.0;
  double t_minus = 0.0;
  std::optional<Rational> t_plus_exact;
  std::optional<Rational> t_minus_exact;
  std::vector<SubsetMask> g_plus;
  std::vector<SubsetMask> g_minus;
};

/// Plain exhaustive loop: every mask, sum recomputed from scratch, no pruning.
/// Rational arithmetic when the matrix is exact (unless `force_float`).
inline OracleResult brute_force_oracle(const CouplingMatrix& c, bool force_float = false, double tol = 1e-9) {
  const std::size_t n = c.size();
  if (n > 16) throw Error(ErrorKind::InstanceTooLarge, "oracle is limited to n <= 16");
  const std::uint32_t total = 1u << n;
  OracleResult out;

  if (c.is_exact() && !force_float) {
    std::optional<Rational> lo, hi;
    for (std::uint32_t m = 0; m < total; ++m) {
      const SubsetMask s(m);
      if (s.size() < 2) continue;
      const Rational ratio = subset_sum_exact(c, s) / (s.size() - 1);
      if (!lo || ratio < *lo) lo = ratio;
      if (!hi || ratio > *hi) hi = ratio;
    }
    for (std::uint32_t m = 0; m < total; ++m) {
      const SubsetMask s(m);
      if (s.size() < 2) continue;
      const Rational sum = subset_sum_exact(c, s);
      if (sum == 0) continue;
      const Rational ratio = sum / (s.size() - 1);
      if (ratio == *lo) out.g_plus.push_back(s);
      if (ratio == *hi) out.g_minus.push_back(s);
    }
    out.t_plus_exact = -*lo;
    out.t_minus_exact = -*hi;
    out.t_plus = to_double(*out.t_plus_exact);
    out.t_minus = to_double(*out.t_minus_exact);
  } else {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::uint32_t m = 0; m < total; ++m) {
      const SubsetMask s(m);
      if (s.size() < 2) continue;
      const auto r = detail::scratch_ratio(c, s);
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    for (std::uint32_t m = 0; m < total; ++m) {
      const SubsetMask s(m);
      if (s.size() < 2) continue;
      const auto r = detail::scratch_ratio(c, s);
      if (r.zero) continue;
      if (lo != 0.0 && std::abs(r.ratio - lo) <= detail::tie_width(lo, tol)) out.g_plus.push_back(s);
      if (hi != 0.0 && std::abs(r.ratio - hi) <= detail::tie_width(hi, tol)) out.g_minus.push_back(s);
    }
    out.t_plus = lo == 0.0 ? 0.0 : -lo;
    out.t_minus = hi == 0.0 ? 0.0 : -hi;
  }
  std::sort(out.g_plus.begin(), out.g_plus.end(), canonical_less);
  std::sort(out.g_minus.begin(), out.g_minus.end(), canonical_less);
  return out;
}

}  // namespace loggas
