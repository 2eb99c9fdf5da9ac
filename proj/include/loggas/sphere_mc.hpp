#pragma once

// Monte Carlo layer on (S^2)^N:
//   E(p) = -sum_{i<j} c(i,j) log d(p_i,p_j)^2,   d = chordal distance,
//   Z(beta) = E_uniform[ prod_{i<j} d(p_i,p_j)^{2 c(i,j) beta} ].
// Plain Monte Carlo for Z, the exact two-particle value, a pole-order fit
// for log Z near a critical endpoint, and a single-particle Metropolis
// sampler for the Gibbs measure with collapse observables.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "loggas/coupling.hpp"
#include "loggas/critical_solver.hpp"
#include "loggas/errors.hpp"
#include "loggas/parallel.hpp"
#include "loggas/rng.hpp"

namespace loggas {

using Vec3 = std::array<double, 3>;

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

inline double chordal_distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double chordal_distance2(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

/// N points on the unit sphere.
class SphereConfiguration {
 public:
  SphereConfiguration() = default;

  explicit SphereConfiguration(std::vector<Vec3> points) : points_(std::move(points)) {
    for (const auto& p : points_)
      if (std::abs(norm(p) - 1.0) > 1e-12) throw Error(ErrorKind::InvalidInput, "point is not on the unit sphere");
  }

  std::size_t size() const noexcept { return points_.size(); }
  const Vec3& operator[](std::size_t i) const noexcept { return points_[i]; }
  std::span<const Vec3> points() const noexcept { return points_; }

  /// Replaces point i; caller guarantees unit norm.
  void set(std::size_t i, const Vec3& p) noexcept { points_[i] = p; }

  friend bool operator==(const SphereConfiguration&, const SphereConfiguration&) = default;

 private:
  std::vector<Vec3> points_;
};

/// Uniform point on S^2: normalized standard normal vector in R^3.
template <class Rng>
Vec3 uniform_point(Rng& rng, std::normal_distribution<double>& normal) {
  for (;;) {
    Vec3 g{normal(rng), normal(rng), normal(rng)};
    const double r = norm(g);
    if (r > 0.0) return {g[0] / r, g[1] / r, g[2] / r};
  }
}

inline SphereConfiguration sample_uniform(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "need n >= 1");
  CounterRng rng(seed, stream);
  std::normal_distribution<double> normal;
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = uniform_point(rng, normal);
  return SphereConfiguration(std::move(pts));
}

/// -sum c(i,j) log d^2; pairs with c(i,j) = 0 are skipped.
inline double energy(const CouplingMatrix& c, const SphereConfiguration& cfg) {
  const std::size_t n = c.size();
  if (cfg.size() != n) throw Error(ErrorKind::InvalidInput, "configuration size does not match couplings");
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double cij = c(i, j);
      if (cij == 0.0) continue;
      const double d2 = chordal_distance2(cfg[i], cfg[j]);
      if (d2 == 0.0)
        throw Error(ErrorKind::CoincidentPoints,
                    "p" + std::to_string(i + 1) + " and p" + std::to_string(j + 1) + " coincide");
      e -= cij * std::log(d2);
    }
  return e;
}

/// Z for two particles: integral of d(p,q)^{2 s} over uniform p, q with
/// s = c12 * beta, equal to 2^{2s} / (s + 1) for s > -1.
inline double analytic_partition_two(double c12, double beta) {
  const double s = c12 * beta;
  if (!(s > -1.0)) throw Error(ErrorKind::OutsideDomain, "c12 * beta must exceed -1");
  return std::exp2(2.0 * s) / (s + 1.0);
}

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // from batch means
  std::uint64_t samples = 0;
  bool heavy_tail = false;
};

/// Open interval (beta-, beta+) from the float solver.
struct BetaInterval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double beta) const { return beta > lower && beta < upper; }
};

inline BetaInterval finiteness_interval(const CouplingMatrix& c) {
  SolverOptions opts;
  const auto r = critical_interval(c, opts);
  return {r.minus.beta, r.plus.beta};
}

inline bool heavy_tailed(const CouplingMatrix& c, double beta) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c(i, j) != 0.0 && c(i, j) * beta <= -0.5) return true;
  return false;
}

inline constexpr std::size_t kBatches = 32;

/// Plain Monte Carlo estimate of Z(beta). Batch b draws from stream b of the
/// counter generator, so results do not depend on the worker count.
inline MCEstimate estimate_partition(const CouplingMatrix& c, double beta, std::uint64_t samples, std::uint64_t seed,
                                     std::optional<BetaInterval> interval = std::nullopt, unsigned threads = 0) {
  if (samples < 1000) throw Error(ErrorKind::InvalidInput, "need at least 1000 samples");
  const BetaInterval iv = interval ? *interval : finiteness_interval(c);
  if (!iv.contains(beta))
    throw Error(ErrorKind::OutsideInterval, "beta = " + std::to_string(beta) + " is outside (beta-, beta+)");

  const std::size_t n = c.size();
  std::vector<double> sums(kBatches, 0.0);
  std::vector<std::uint64_t> counts(kBatches, 0);
  parallel_for(kBatches, worker_count(threads), [&](std::size_t b) {
    const std::uint64_t count = samples / kBatches + (b < samples % kBatches ? 1 : 0);
    CounterRng rng(seed, b);
    std::normal_distribution<double> normal;
    std::vector<Vec3> pts(n);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
      for (auto& p : pts) p = uniform_point(rng, normal);
      double log_w = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const double cb = c(i, j) * beta;
          if (cb != 0.0) log_w += cb * std::log(chordal_distance2(pts[i], pts[j]));
        }
      acc += std::exp(log_w);
    }
    sums[b] = acc;
    counts[b] = count;
  });

  MCEstimate est;
  est.samples = samples;
  double total = 0.0;
  for (double s : sums) total += s;
  est.mean = total / static_cast<double>(samples);
  double ss = 0.0;
  for (std::size_t b = 0; b < kBatches; ++b) {
    const double m = sums[b] / static_cast<double>(counts[b]);
    ss += (m - est.mean) * (m - est.mean);
  }
  est.std_error = std::sqrt(ss / static_cast<double>(kBatches * (kBatches - 1)));
  est.heavy_tail = heavy_tailed(c, beta);
  return est;
}

/// Least-squares slope of log Z against -log|beta - beta_crit|; near a pole of
/// order kappa that slope approaches kappa.
inline double pole_order_fit(std::span<const double> betas, std::span<const double> log_z, double beta_crit) {
  if (betas.size() != log_z.size()) throw Error(ErrorKind::DegenerateGrid, "grid and values differ in length");
  if (betas.size() < 5) throw Error(ErrorKind::DegenerateGrid, "need at least 5 grid points");
  const double side = betas.front() - beta_crit;
  std::vector<double> x(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double gap = betas[i] - beta_crit;
    if (gap == 0.0 || (gap > 0.0) != (side > 0.0))
      throw Error(ErrorKind::DegenerateGrid, "grid must lie strictly on one side of the endpoint");
    if (i > 0 && !(std::abs(gap) < std::abs(betas[i - 1] - beta_crit)))
      throw Error(ErrorKind::DegenerateGrid, "grid must approach the endpoint monotonically");
    if (!std::isfinite(log_z[i])) throw Error(ErrorKind::DegenerateGrid, "non-finite log Z value");
    x[i] = -std::log(std::abs(gap));
  }
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += log_z[i];
  mx /= k, my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (log_z[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateGrid, "grid has no spread in log distance");
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Metropolis sampling of the Gibbs measure
// ---------------------------------------------------------------------------

struct ChainParams {
  double beta = 0.0;
  std::uint64_t steps = 0;    // sweeps, burn-in included
  std::uint64_t burn_in = 0;  // sweeps
  std::uint64_t thin = 1;     // emit every `thin` sweeps after burn-in
  double step_size = 0.5;     // tangent proposal scale
  std::uint64_t seed = 0;
  bool auto_tune = true;      // adapt step_size during burn-in only
};

struct ChainSummary {
  std::uint64_t emitted = 0;
  double acceptance_rate = 0.0;  // after burn-in
  double final_step_size = 0.0;
};

/// Single-particle Metropolis: p_i' = normalize(p_i + step * g) with g standard
/// normal in R^3, accepted with probability min(1, exp(-beta dE)). One sweep
/// proposes a move for every particle in index order.
class MetropolisChain {
 public:
  MetropolisChain(const CouplingMatrix& c, ChainParams params, std::optional<BetaInterval> interval = std::nullopt)
      : c_(c), params_(params) {
    if (params_.thin < 1) throw Error(ErrorKind::InvalidInput, "thin must be >= 1");
    if (params_.burn_in >= params_.steps) throw Error(ErrorKind::InvalidInput, "burn_in must be < steps");
    if (!(params_.step_size > 0.0)) throw Error(ErrorKind::InvalidInput, "step_size must be positive");
    const BetaInterval iv = interval ? *interval : finiteness_interval(c_);
    if (!iv.contains(params_.beta))
      throw Error(ErrorKind::OutsideInterval,
                  "beta = " + std::to_string(params_.beta) + " is outside (beta-, beta+)");
  }

  /// Calls visit(const SphereConfiguration&) for each emitted state.
  template <class Visit>
  ChainSummary run(Visit&& visit) {
    const std::size_t n = c_.size();
    CounterRng rng(params_.seed, 0);
    std::normal_distribution<double> normal;
    std::vector<Vec3> pts(n);
    for (auto& p : pts) p = uniform_point(rng, normal);
    SphereConfiguration cfg(pts);

    double step = params_.step_size;
    std::uint64_t accepted = 0, proposed = 0, window_acc = 0, window_prop = 0;
    ChainSummary summary;
    for (std::uint64_t sweep = 0; sweep < params_.steps; ++sweep) {
      const bool burning = sweep < params_.burn_in;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec3& old = cfg[i];
        Vec3 prop{old[0] + step * normal(rng), old[1] + step * normal(rng), old[2] + step * normal(rng)};
        const double r = norm(prop);
        const double u = rng.uniform();
        if (r == 0.0) continue;
        prop = {prop[0] / r, prop[1] / r, prop[2] / r};

        // beta * dE = -beta sum_j c(i,j) (log d'^2 - log d^2)
        double beta_de = 0.0;
        bool blocked = false;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || c_(i, j) == 0.0) continue;
          const double d2_new = chordal_distance2(prop, cfg[j]);
          if (d2_new == 0.0) {
            blocked = true;
            break;
          }
          beta_de -= params_.beta * c_(i, j) * (std::log(d2_new) - std::log(chordal_distance2(old, cfg[j])));
        }
        const bool accept = !blocked && (beta_de <= 0.0 || u < std::exp(-beta_de));
        if (accept) cfg.set(i, prop);
        if (burning) {
          window_acc += accept;
          ++window_prop;
        } else {
          accepted += accept;
          ++proposed;
        }
      }
      if (burning && params_.auto_tune && (sweep + 1) % 50 == 0) {
        const double rate = static_cast<double>(window_acc) / static_cast<double>(window_prop);
        if (rate < 0.3) step = std::max(1e-3, step * 0.8);
        if (rate > 0.5) step = std::min(4.0, step * 1.25);
        window_acc = window_prop = 0;
      }
      if (!burning && (sweep - params_.burn_in + 1) % params_.thin == 0) {
        visit(static_cast<const SphereConfiguration&>(cfg));
        ++summary.emitted;
      }
    }
    summary.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
    summary.final_step_size = step;
    return summary;
  }

  const ChainParams& params() const { return params_; }

 private:
  const CouplingMatrix& c_;
  ChainParams params_;
};

/// Convenience wrapper collecting every emitted state.
inline std::vector<SphereConfiguration> metropolis_chain(const CouplingMatrix& c, const ChainParams& params,
                                                         ChainSummary* summary = nullptr) {
  std::vector<SphereConfiguration> out;
  MetropolisChain chain(c, params);
  const auto s = chain.run([&](const SphereConfiguration& cfg) { out.push_back(cfg); });
  if (summary) *summary = s;
  return out;
}

// ---------------------------------------------------------------------------
// Collapse observables
// ---------------------------------------------------------------------------

/// Linear-interpolation quantile (type 7) of unsorted data.
inline double quantile(std::vector<double> data, double q) {
  if (data.empty()) throw Error(ErrorKind::EmptySample, "quantile of empty data");
  std::sort(data.begin(), data.end());
  const double pos = q * static_cast<double>(data.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, data.size() - 1);
  return data[lo] + (pos - static_cast<double>(lo)) * (data[hi] - data[lo]);
}

inline constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.50, 0.75, 0.95};

struct ObservableQuantiles {
  std::string name;
  std::array<double, 5> q{};  // levels kQuantileLevels
  double median() const { return q[2]; }
};

struct CollapseStats {
  std::vector<ObservableQuantiles> observables;
  double mean_energy = 0.0;
  std::uint64_t samples = 0;

  const ObservableQuantiles& get(const std::string& name) const {
    for (const auto& o : observables)
      if (o.name == name) return o;
    throw Error(ErrorKind::InvalidInput, "no observable named " + name);
  }
};

/// Streams configurations and accumulates, per sample, the minimum distance
/// over opposite-class pairs, the minimum over same-class pairs, the maximum
/// over all pairs, and the energy. `classes` labels each particle (e.g. the
/// sign of its charge); an empty vector puts everyone in one class.
class CollapseAccumulator {
 public:
  CollapseAccumulator(const CouplingMatrix& c, std::vector<int> classes) : c_(c), classes_(std::move(classes)) {
    if (classes_.empty()) classes_.assign(c_.size(), 0);
    if (classes_.size() != c_.size()) throw Error(ErrorKind::InvalidInput, "class labels do not match particle count");
    for (std::size_t i = 0; i < classes_.size(); ++i)
      for (std::size_t j = i + 1; j < classes_.size(); ++j) (classes_[i] == classes_[j] ? has_same_ : has_opposite_) = true;
  }

  void add(const SphereConfiguration& cfg) {
    const std::size_t n = cfg.size();
    double min_opp = 2.0, min_same = 2.0, max_all = 0.0, e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d2 = chordal_distance2(cfg[i], cfg[j]);
        const double d = std::min(2.0, std::sqrt(d2));
        if (classes_[i] == classes_[j])
          min_same = std::min(min_same, d);
        else
          min_opp = std::min(min_opp, d);
        max_all = std::max(max_all, d);
        if (c_(i, j) != 0.0) e -= c_(i, j) * std::log(d2);  // +-inf on coincidence
      }
    if (has_opposite_) min_opposite_.push_back(min_opp);
    if (has_same_) min_same_.push_back(min_same);
    max_pair_.push_back(max_all);
    energy_sum_ += e;
  }

  void operator()(const SphereConfiguration& cfg) { add(cfg); }

  CollapseStats stats() const {
    if (max_pair_.empty()) throw Error(ErrorKind::EmptySample, "no samples");
    CollapseStats s;
    s.samples = max_pair_.size();
    auto push = [&](const char* name, const std::vector<double>& v) {
      ObservableQuantiles o;
      o.name = name;
      for (std::size_t k = 0; k < kQuantileLevels.size(); ++k) o.q[k] = quantile(v, kQuantileLevels[k]);
      s.observables.push_back(std::move(o));
    };
    if (has_opposite_) push("min_opposite_distance", min_opposite_);
    if (has_same_) push("min_same_distance", min_same_);
    push("max_pair_distance", max_pair_);
    s.mean_energy = energy_sum_ / static_cast<double>(s.samples);
    return s;
  }

 private:
  const CouplingMatrix& c_;
  std::vector<int> classes_;
  bool has_same_ = false;
  bool has_opposite_ = false;
  std::vector<double> min_opposite_;
  std::vector<double> min_same_;
  std::vector<double> max_pair_;
  double energy_sum_ = 0.0;
};

inline CollapseStats collapse_observables(std::span<const SphereConfiguration> samples, const CouplingMatrix& c,
                                          std::vector<int> classes = {}) {
  if (samples.empty()) throw Error(ErrorKind::EmptySample, "no samples");
  CollapseAccumulator acc(c, std::move(classes));
  for (const auto& cfg : samples) acc.add(cfg);
  return acc.stats();
}

/// Class labels from charge signs: 0 for positive, 1 for negative.
inline std::vector<int> sign_classes(const ChargeVector& k) {
  std::vector<int> out;
  for (double x : k.values()) out.push_back(x > 0.0 ? 0 : 1);
  return out;
}

}  // namespace loggas
