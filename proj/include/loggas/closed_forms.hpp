#pragma once

// Closed-form critical data for two physical families:
//  - the neutral two-component plasma (positive temperature): beta+ = 1/(z1 z2),
//    G+ = all mixed pairs, kappa+ = min(n1, n2);
//  - point vortices with nearly uniform vorticities on each sign class
//    (negative temperature): beta- is attained by collapsing one sign class.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "loggas/coupling.hpp"
#include "loggas/errors.hpp"
#include "loggas/rational.hpp"
#include "loggas/subset.hpp"

namespace loggas {

struct TwoComponentCritical {
  double beta_plus = 0.0;
  std::optional<Rational> beta_plus_exact;
  int kappa_plus = 0;
  /// Free-energy log prefactor kappa+/N = z2/(z1+z2) with z1 >= z2.
  double free_energy_prefactor = 0.0;
  std::string g_plus_description = "all mixed pairs";
  /// G+ in the caller's labels: {i, j} with i in species 1 and j in species 2.
  std::vector<SubsetMask> g_plus;
};

inline TwoComponentCritical two_component_critical(const TwoComponentSpec& spec) {
  spec.validate();
  if (!spec.neutral()) throw Error(ErrorKind::NotNeutral, "two-component plasma is not charge neutral");
  // Relabel so the first species carries the larger charge; neutrality then
  // makes it the smaller species.
  const bool swap = spec.z1 < spec.z2;
  const int n_big_charge = swap ? spec.n2 : spec.n1;
  const double z_big = swap ? spec.z2 : spec.z1;
  const double z_small = swap ? spec.z1 : spec.z2;

  TwoComponentCritical out;
  out.beta_plus = 1.0 / (spec.z1 * spec.z2);
  if (spec.z1_exact && spec.z2_exact) {
    out.beta_plus_exact = Rational(1) / (*spec.z1_exact * *spec.z2_exact);
    out.beta_plus = to_double(*out.beta_plus_exact);
  }
  out.kappa_plus = n_big_charge;
  out.free_energy_prefactor = z_small / (z_big + z_small);
  for (int i = 0; i < spec.n1; ++i)
    for (int j = spec.n1; j < spec.total(); ++j)
      out.g_plus.push_back(SubsetMask::of({static_cast<std::size_t>(i), static_cast<std::size_t>(j)}));
  std::sort(out.g_plus.begin(), out.g_plus.end(), canonical_less);
  return out;
}

enum class TechnicalInequality { ineq1, ineq2, both, neither };

inline const char* to_string(TechnicalInequality t) {
  switch (t) {
    case TechnicalInequality::ineq1: return "ineq1";
    case TechnicalInequality::ineq2: return "ineq2";
    case TechnicalInequality::both: return "both";
    case TechnicalInequality::neither: return "neither";
  }
  return "?";
}

/// For z >= 1 and odd a = 2k-1, b = 2l-1 with (k,l) != (0,0), k,l >= 0, reports
/// which of |z a - b| >= z - (a + b - 1)  (ineq1)  and  a + b >= z + 1  (ineq2)
/// holds. At least one always does.
inline TechnicalInequality technical_inequality(double z, long a, long b) {
  auto admissible = [](long x) { return x >= -1 && (x % 2 != 0); };
  if (!admissible(a) || !admissible(b) || (a == -1 && b == -1))
    throw Error(ErrorKind::InvalidParity, "a and b must be odd, >= -1, and not both -1");
  if (!(z >= 1.0)) throw Error(ErrorKind::InvalidInput, "z must be >= 1");
  const double da = static_cast<double>(a), db = static_cast<double>(b);
  const bool one = std::abs(z * da - db) >= z - (da + db - 1.0);
  const bool two = da + db >= z + 1.0;
  if (one && two) return TechnicalInequality::both;
  if (one) return TechnicalInequality::ineq1;
  if (two) return TechnicalInequality::ineq2;
  return TechnicalInequality::neither;
}

namespace detail {

inline void check_onsager_domain(const ChargeVector& k) {
  bool pos = false, neg = false;
  for (double x : k.values()) (x > 0.0 ? pos : neg) = true;
  if (!pos || !neg) throw Error(ErrorKind::SingleSignCharges, "charges must include both signs");
  if (k.size() <= 2) throw Error(ErrorKind::TooFewParticles, "need N > 2");
}

}  // namespace detail

/// Both strict variation conditions: on each sign class, max |k| < 3/2 min |k|.
inline bool onsager_conditions(const ChargeVector& k) {
  detail::check_onsager_domain(k);
  auto holds = [&](int sign) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double x : k.values())
      if ((x > 0.0) == (sign > 0)) {
        lo = std::min(lo, std::abs(x));
        hi = std::max(hi, std::abs(x));
      }
    return hi < 1.5 * lo;
  };
  return holds(+1) && holds(-1);
}

enum class CollapseSide { positive_collapse, negative_collapse, tie };

inline const char* to_string(CollapseSide s) {
  switch (s) {
    case CollapseSide::positive_collapse: return "positive_collapse";
    case CollapseSide::negative_collapse: return "negative_collapse";
    case CollapseSide::tie: return "tie";
  }
  return "?";
}

struct OnsagerCritical {
  double beta_minus = 0.0;
  CollapseSide winning_side = CollapseSide::tie;
  /// (1 - N_s) / sum_{i<j in class s} k_i k_j; -inf for a class of one particle.
  double candidate_pos = 0.0;
  double candidate_neg = 0.0;
  SubsetMask positive_set;
  SubsetMask negative_set;
  /// Predicted G-: the collapsing class (both classes in the tie case).
  std::vector<SubsetMask> predicted_g_minus;
  /// Predicted limiting support, e.g. "p1=p2=p3".
  std::string support;
};

inline OnsagerCritical onsager_beta_minus(const ChargeVector& k) {
  if (!onsager_conditions(k)) throw Error(ErrorKind::ConditionsFail, "vorticity variation conditions fail");
  OnsagerCritical out;
  std::uint32_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < k.size(); ++i) (k[i] > 0.0 ? pos : neg) |= 1u << i;
  out.positive_set = SubsetMask(pos);
  out.negative_set = SubsetMask(neg);

  auto candidate = [&](SubsetMask s) {
    if (s.size() < 2) return -std::numeric_limits<double>::infinity();
    const auto m = s.members();
    double sum = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) sum += k[m[a]] * k[m[b]];
    return (1.0 - s.size()) / sum;
  };
  out.candidate_pos = candidate(out.positive_set);
  out.candidate_neg = candidate(out.negative_set);
  out.beta_minus = std::max(out.candidate_pos, out.candidate_neg);

  const double scale = std::max(std::abs(out.candidate_pos), std::abs(out.candidate_neg));
  const bool tie = std::isfinite(out.candidate_pos) && std::isfinite(out.candidate_neg) &&
                   std::abs(out.candidate_pos - out.candidate_neg) <= 1e-12 * scale;
  auto pattern = [](SubsetMask s) {
    std::string r;
    for (auto i : s.members()) r += (r.empty() ? "p" : "=p") + std::to_string(i + 1);
    return r;
  };
  if (tie) {
    out.winning_side = CollapseSide::tie;
    out.predicted_g_minus = {out.positive_set, out.negative_set};
    out.support = pattern(out.positive_set) + ", " + pattern(out.negative_set);
  } else if (out.candidate_pos > out.candidate_neg) {
    out.winning_side = CollapseSide::positive_collapse;
    out.predicted_g_minus = {out.positive_set};
    out.support = pattern(out.positive_set);
  } else {
    out.winning_side = CollapseSide::negative_collapse;
    out.predicted_g_minus = {out.negative_set};
    out.support = pattern(out.negative_set);
  }
  std::sort(out.predicted_g_minus.begin(), out.predicted_g_minus.end(), canonical_less);
  return out;
}

}  // namespace loggas
