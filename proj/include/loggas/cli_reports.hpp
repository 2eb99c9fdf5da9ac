#pragma once

// Input ingestion, report rendering and the batch experiments behind the
// `loggas` command-line tool. Everything here is deterministic given the input
// document, the seed, the arithmetic mode and the tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loggas/closed_forms.hpp"
#include "loggas/coupling.hpp"
#include "loggas/critical_solver.hpp"
#include "loggas/graph_bridge.hpp"
#include "loggas/parallel.hpp"
#include "loggas/spectral.hpp"
#include "loggas/sphere_mc.hpp"

namespace loggas {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// ---------------------------------------------------------------------------
// Input documents
// ---------------------------------------------------------------------------

enum class RandomModel { couplings, charges };

inline const char* to_string(RandomModel m) {
  return m == RandomModel::couplings ? "gaussian_couplings" : "gaussian_charges";
}

struct RandomSpec {
  RandomModel model = RandomModel::couplings;
  std::size_t n = 0;
  double variance = 1.0;
  std::uint64_t seed = 0;
};

struct ParsedInput {
  std::string kind;  // matrix | charges | two_component | graph | random
  CouplingMatrix couplings;
  std::optional<ChargeVector> charges;
  std::optional<TwoComponentSpec> two_component;
  std::optional<GraphSpec> graph;
  std::optional<RandomSpec> random;

  /// Particle class labels for collapse statistics (charge signs when known).
  std::vector<int> classes() const {
    if (charges) return sign_classes(*charges);
    return {};
  }
};

namespace detail {

/// A JSON scalar as a number: integers and "p/q" strings are exact, JSON
/// floats are not.
struct Scalar {
  double value = 0.0;
  std::optional<Rational> exact;
};

inline Scalar read_scalar(const ordered_json& j, const std::string& where) {
  if (j.is_number_integer()) {
    Rational q = j.is_number_unsigned() ? Rational(j.get<std::uint64_t>()) : Rational(j.get<std::int64_t>());
    return {to_double(q), q};
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, where + ": non-finite number");
    return {v, std::nullopt};
  }
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>());
    return {to_double(q), q};
  }
  throw Error(ErrorKind::InvalidInput, where + ": expected a number or \"p/q\" string");
}

inline std::int64_t read_int(const ordered_json& j, const std::string& where) {
  if (!j.is_number_integer()) throw Error(ErrorKind::InvalidInput, where + ": expected an integer");
  return j.get<std::int64_t>();
}

inline void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::InvalidInput, where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw Error(ErrorKind::InvalidInput, where + ": unknown key \"" + it.key() + "\"");
  }
}

inline const ordered_json& require(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw Error(ErrorKind::InvalidInput, where + ": missing key \"" + key + "\"");
  return obj.at(key);
}

}  // namespace detail

/// Parses one input document. Exactly one top-level key is allowed; unknown
/// keys anywhere are rejected.
inline ParsedInput parse_input(const ordered_json& doc) {
  using namespace detail;
  check_keys(doc, {"matrix", "charges", "two_component", "graph", "random"}, "input");
  if (doc.size() != 1) throw Error(ErrorKind::InvalidInput, "input must contain exactly one of matrix, charges, two_component, graph, random");
  ParsedInput in;
  in.kind = doc.begin().key();
  const ordered_json& body = doc.begin().value();

  if (in.kind == "matrix") {
    if (!body.is_array()) throw Error(ErrorKind::InvalidInput, "matrix: expected an array of rows");
    std::vector<std::vector<Scalar>> rows;
    bool exact = true;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (!body[i].is_array()) throw Error(ErrorKind::InvalidInput, "matrix: row " + std::to_string(i) + " is not an array");
      rows.emplace_back();
      for (std::size_t j = 0; j < body[i].size(); ++j) {
        rows.back().push_back(read_scalar(body[i][j], "matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
        exact = exact && rows.back().back().exact.has_value();
      }
    }
    if (exact) {
      std::vector<std::vector<Rational>> q;
      for (const auto& r : rows) {
        q.emplace_back();
        for (const auto& s : r) q.back().push_back(*s.exact);
      }
      in.couplings = from_matrix(q);
    } else {
      std::vector<std::vector<double>> d;
      for (const auto& r : rows) {
        d.emplace_back();
        for (const auto& s : r) d.back().push_back(s.value);
      }
      in.couplings = from_matrix(d);
    }
  } else if (in.kind == "charges") {
    if (!body.is_array()) throw Error(ErrorKind::InvalidInput, "charges: expected an array");
    std::vector<Scalar> ks;
    bool exact = true;
    for (std::size_t i = 0; i < body.size(); ++i) {
      ks.push_back(read_scalar(body[i], "charges[" + std::to_string(i) + "]"));
      exact = exact && ks.back().exact.has_value();
    }
    if (exact) {
      std::vector<Rational> q;
      for (const auto& s : ks) q.push_back(*s.exact);
      in.charges.emplace(std::move(q));
    } else {
      std::vector<double> d;
      for (const auto& s : ks) d.push_back(s.value);
      in.charges.emplace(std::move(d));
    }
    in.couplings = from_charges(*in.charges);
  } else if (in.kind == "two_component") {
    check_keys(body, {"n1", "n2", "z1", "z2"}, "two_component");
    const auto n1 = read_int(require(body, "n1", "two_component"), "two_component.n1");
    const auto n2 = read_int(require(body, "n2", "two_component"), "two_component.n2");
    const Scalar z1 = read_scalar(require(body, "z1", "two_component"), "two_component.z1");
    const Scalar z2 = read_scalar(require(body, "z2", "two_component"), "two_component.z2");
    if (n1 < 1 || n2 < 1 || n1 > 64 || n2 > 64)
      throw Error(ErrorKind::InvalidSpec, "two_component: species counts must be in [1, 64]");
    if (z1.exact && z2.exact)
      in.two_component = TwoComponentSpec::make(static_cast<int>(n1), static_cast<int>(n2), *z1.exact, *z2.exact);
    else
      in.two_component = TwoComponentSpec::make(static_cast<int>(n1), static_cast<int>(n2), z1.value, z2.value);
    in.charges = charges_of(*in.two_component);
    in.couplings = from_charges(*in.charges);
  } else if (in.kind == "graph") {
    check_keys(body, {"n", "edges"}, "graph");
    const auto n = read_int(require(body, "n", "graph"), "graph.n");
    if (n < 2 || n > 64) throw Error(ErrorKind::InvalidSpec, "graph: n must be in [2, 64]");
    const auto& edges = require(body, "edges", "graph");
    if (!edges.is_array()) throw Error(ErrorKind::InvalidInput, "graph.edges: expected an array");
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (const auto& pair : edges) {
      if (!pair.is_array() || pair.size() != 2) throw Error(ErrorKind::InvalidInput, "graph.edges: expected [i, j] pairs");
      const auto i = read_int(pair[0], "graph.edges"), j = read_int(pair[1], "graph.edges");
      if (i < 0 || j < 0) throw Error(ErrorKind::InvalidSpec, "graph.edges: negative vertex index");
      e.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    in.graph = GraphSpec::make(static_cast<std::size_t>(n), std::move(e));
    in.couplings = from_graph(*in.graph);
  } else {  // random
    check_keys(body, {"model", "n", "variance", "seed"}, "random");
    const auto& model = require(body, "model", "random");
    if (!model.is_string()) throw Error(ErrorKind::InvalidInput, "random.model: expected a string");
    RandomSpec spec;
    const std::string m = model.get<std::string>();
    if (m == "couplings" || m == "gaussian_couplings")
      spec.model = RandomModel::couplings;
    else if (m == "charges" || m == "gaussian_charges")
      spec.model = RandomModel::charges;
    else
      throw Error(ErrorKind::InvalidInput, "random.model must be \"couplings\" or \"charges\"");
    const auto n = read_int(require(body, "n", "random"), "random.n");
    if (n < 2 || n > 4096) throw Error(ErrorKind::InvalidSpec, "random.n must be in [2, 4096]");
    spec.n = static_cast<std::size_t>(n);
    spec.seed = static_cast<std::uint64_t>(read_int(require(body, "seed", "random"), "random.seed"));
    if (spec.model == RandomModel::couplings) {
      spec.variance = body.contains("variance") ? read_scalar(body["variance"], "random.variance").value
                                                : 1.0 / static_cast<double>(spec.n);
      in.couplings = sample_gaussian_couplings(spec.n, spec.variance, spec.seed);
    } else {
      if (body.contains("variance"))
        throw Error(ErrorKind::InvalidInput, "random.variance applies to the couplings model only");
      in.charges = sample_gaussian_charges(spec.n, spec.seed);
      in.couplings = from_charges(*in.charges);
    }
    in.random = spec;
  }
  return in;
}

inline ParsedInput parse_input_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return parse_input(doc);
}

inline ParsedInput read_input_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot open input file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_input_text(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization helpers
// ---------------------------------------------------------------------------

/// Extended reals: +-inf become the strings "inf" / "-inf".
inline ordered_json extended(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline ordered_json exact_or_null(const std::optional<Rational>& q) {
  if (!q) return nullptr;
  return to_string(*q);
}

inline ordered_json subset_json(SubsetMask s) {
  ordered_json a = ordered_json::array();
  for (auto i : s.members()) a.push_back(i + 1);
  return a;
}

inline ordered_json family_json(const std::vector<SubsetMask>& family) {
  ordered_json a = ordered_json::array();
  for (auto s : family) a.push_back(subset_json(s));
  return a;
}

inline std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

/// "-(1/N) log Z = (kappa/N) log|beta - beta_c| + O(1)" with numbers filled in.
inline std::string free_energy_asymptote(const CriticalSide& side, std::size_t n) {
  if (!side.finite) return "";
  const std::string kappa = side.kappa ? std::to_string(*side.kappa) : "kappa";
  const std::string beta = side.beta_exact ? to_string(*side.beta_exact) : format_real(side.beta);
  return "-(1/N) log Z = (" + kappa + "/" + std::to_string(n) + ") log|beta - (" + beta + ")| + O(1)";
}

inline ordered_json side_json(const CriticalSide& s, std::size_t n) {
  ordered_json j;
  j["t"] = s.opt.t_value;
  j["t_exact"] = exact_or_null(s.opt.t_exact);
  j["beta"] = extended(s.beta);
  j["beta_exact"] = exact_or_null(s.beta_exact);
  j["finite"] = s.finite;
  j["optimizers"] = family_json(s.opt.optimizers);
  j["optimizers_truncated"] = s.opt.truncated;
  j["kappa"] = s.kappa ? ordered_json(*s.kappa) : ordered_json(nullptr);
  j["nest_status"] = to_string(s.nest_status);
  ordered_json nests = ordered_json::array();
  for (const auto& nest : s.max_nests) nests.push_back(family_json(nest.members));
  j["max_nests"] = nests;
  j["nests_truncated"] = s.nests_truncated;
  j["support"] = s.support.rendered;
  j["support_union"] = s.support.joined();
  j["free_energy_asymptote"] = free_energy_asymptote(s, n);
  return j;
}

inline ordered_json critical_json(const CriticalReport& r) {
  ordered_json j;
  j["schema"] = "loggas.critical";
  j["schema_version"] = kSchemaVersion;
  j["n"] = r.n;
  j["mode"] = r.exact ? "exact" : "float";
  j["beta_minus"] = extended(r.minus.beta);
  j["beta_plus"] = extended(r.plus.beta);
  j["degenerate"] = r.degenerate();
  j["plus"] = side_json(r.plus, r.n);
  j["minus"] = side_json(r.minus, r.n);
  return j;
}

inline std::string critical_text(const CriticalReport& r) {
  std::ostringstream os;
  os << "particles: " << r.n << " (" << (r.exact ? "exact" : "float") << " arithmetic)\n";
  os << "finite on (beta-, beta+) = (" << format_real(r.minus.beta) << ", " << format_real(r.plus.beta) << ")\n";
  if (r.degenerate()) os << "degenerate: both endpoints infinite\n";
  auto side = [&](const char* name, const CriticalSide& s) {
    os << "\n[" << name << "]\n";
    os << "  T = " << (s.opt.t_exact ? to_string(*s.opt.t_exact) : format_real(s.opt.t_value)) << "\n";
    os << "  beta = " << (s.beta_exact ? to_string(*s.beta_exact) : format_real(s.beta)) << "\n";
    os << "  optimizers:";
    for (auto m : s.opt.optimizers) os << " " << m.label();
    if (s.opt.truncated) os << " ...";
    os << "\n";
    os << "  kappa = " << (s.kappa ? std::to_string(*s.kappa) : std::string("unknown")) << " (" << to_string(s.nest_status) << ")\n";
    for (const auto& p : s.support.rendered) os << "  support: " << p << "\n";
    if (s.nests_truncated) os << "  support: ... (truncated)\n";
    if (s.finite) os << "  " << free_energy_asymptote(s, r.n) << "\n";
  };
  side("plus", r.plus);
  side("minus", r.minus);
  return os.str();
}

/// Generic "path: value" rendering of a report.
inline void flatten_text(const ordered_json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline ordered_json bounds_json(const ParsedInput& in, const SolverOptions& opts) {
  const Spectrum spec = symmetric_eigs(in.couplings);
  const BoundReport eig = eig_bounds(spec);
  ordered_json j;
  j["schema"] = "loggas.bounds";
  j["schema_version"] = kSchemaVersion;
  j["n"] = in.couplings.size();
  j["eigenvalues"] = spec.eigenvalues;
  j["eigen_residual"] = spec.residual;
  j["eigenvalue_bounds"] = {{"beta_plus_lower", extended(eig.beta_plus_lower)},
                            {"beta_minus_upper", extended(eig.beta_minus_upper)}};
  if (in.charges) {
    const BoundReport cb = charge_bounds(*in.charges);
    j["charge_bounds"] = {{"beta_plus_lower", extended(cb.beta_plus_lower)},
                          {"beta_minus_upper", extended(cb.beta_minus_upper)}};
  } else {
    j["charge_bounds"] = nullptr;
  }
  if (in.couplings.size() <= opts.max_particles) {
    const auto r = critical_interval(in.couplings, opts);
    j["exact_interval"] = {{"beta_minus", extended(r.minus.beta)}, {"beta_plus", extended(r.plus.beta)}};
  } else {
    j["exact_interval"] = nullptr;
  }
  return j;
}

inline ordered_json closed_form_json(const ParsedInput& in) {
  ordered_json j;
  j["schema"] = "loggas.closed_form";
  j["schema_version"] = kSchemaVersion;
  if (in.two_component) {
    const auto tc = two_component_critical(*in.two_component);
    j["family"] = "two_component";
    j["beta_plus"] = tc.beta_plus;
    j["beta_plus_exact"] = exact_or_null(tc.beta_plus_exact);
    j["kappa_plus"] = tc.kappa_plus;
    j["free_energy_prefactor"] = tc.free_energy_prefactor;
    j["g_plus"] = tc.g_plus_description;
    j["g_plus_sets"] = family_json(tc.g_plus);
    return j;
  }
  if (in.charges) {
    j["family"] = "onsager";
    const bool ok = onsager_conditions(*in.charges);
    j["conditions_hold"] = ok;
    if (!ok) throw Error(ErrorKind::ConditionsFail, "vorticity variation conditions fail");
    const auto on = onsager_beta_minus(*in.charges);
    j["beta_minus"] = on.beta_minus;
    j["candidate_positive"] = extended(on.candidate_pos);
    j["candidate_negative"] = extended(on.candidate_neg);
    j["winning_side"] = to_string(on.winning_side);
    j["predicted_g_minus"] = family_json(on.predicted_g_minus);
    j["support"] = on.support;
    return j;
  }
  throw Error(ErrorKind::InvalidInput, "closed-form needs two_component or charges input");
}

inline ordered_json arboricity_json(const ParsedInput& in, const SolverOptions& opts) {
  if (!in.graph) throw Error(ErrorKind::InvalidInput, "arboricity needs graph input");
  const auto a = arboricity(*in.graph, opts);
  ordered_json j;
  j["schema"] = "loggas.arboricity";
  j["schema_version"] = kSchemaVersion;
  j["n"] = in.graph->n;
  j["edges"] = in.graph->edges.size();
  j["fractional_arboricity"] = to_string(a.fractional);
  j["fractional_arboricity_value"] = to_double(a.fractional);
  j["arboricity"] = a.arboricity;
  j["witness"] = subset_json(a.witness);
  if (in.graph->n <= 10 && in.graph->edges.size() <= 20)
    j["forest_partition_oracle"] = forest_partition_oracle(*in.graph);
  else
    j["forest_partition_oracle"] = nullptr;
  return j;
}

inline ordered_json sk_json(const ParsedInput& in, const SolverOptions& opts) {
  const OptResult tm = solve_t_minus(in.couplings, opts);
  ordered_json j;
  j["schema"] = "loggas.sk_check";
  j["schema_version"] = kSchemaVersion;
  j["n"] = in.couplings.size();
  j["t_minus"] = tm.t_value;
  j["t_minus_exact"] = exact_or_null(tm.t_exact);
  j["identity_holds"] = sk_ground_state_check(in.couplings, opts);
  return j;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// "a:b:steps" (inclusive linear grid) or "x,y,z". Must be strictly monotone.
inline std::vector<double> parse_beta_grid(const std::string& spec) {
  std::vector<double> grid;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad number in beta grid: '" + s + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw Error(ErrorKind::InvalidInput, "beta grid range must be a:b:steps");
    const double a = number(parts[0]), b = number(parts[1]);
    const double steps = number(parts[2]);
    if (steps < 1 || steps != std::floor(steps)) throw Error(ErrorKind::InvalidInput, "beta grid steps must be a positive integer");
    const auto k = static_cast<std::size_t>(steps);
    for (std::size_t i = 0; i < k; ++i) grid.push_back(k == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1));
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  if (grid.empty()) throw Error(ErrorKind::InvalidInput, "empty beta grid");
  const bool up = grid.size() < 2 || grid[1] > grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1]))
      throw Error(ErrorKind::InvalidInput, "beta grid must be strictly sorted");
  return grid;
}

enum class PartitionBackend { monte_carlo, analytic };

struct PartitionRow {
  double beta = 0.0;
  double log_z = 0.0;
  double log_z_stderr = 0.0;
  std::uint64_t samples = 0;
  bool heavy_tail = false;
};

struct PartitionSweep {
  std::vector<PartitionRow> rows;
  /// Present when the grid approaches a finite endpoint with >= 5 points.
  std::optional<double> fitted_kappa;
  std::optional<double> endpoint;
  std::optional<int> predicted_kappa;
};

inline PartitionSweep run_partition_sweep(const CouplingMatrix& c, const std::vector<double>& grid,
                                          std::uint64_t samples, std::uint64_t seed, PartitionBackend backend,
                                          const SolverOptions& opts) {
  const CriticalReport report = critical_interval(c, opts);
  const BetaInterval iv{report.minus.beta, report.plus.beta};
  for (double b : grid)
    if (!iv.contains(b))
      throw Error(ErrorKind::OutsideInterval, "grid point beta = " + format_real(b) + " is outside (" +
                                                  format_real(iv.lower) + ", " + format_real(iv.upper) + ")");
  if (backend == PartitionBackend::analytic && c.size() != 2)
    throw Error(ErrorKind::InvalidInput, "analytic backend needs exactly two particles");

  PartitionSweep sweep;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    PartitionRow row;
    row.beta = grid[g];
    row.heavy_tail = heavy_tailed(c, grid[g]);
    if (backend == PartitionBackend::analytic) {
      row.log_z = std::log(analytic_partition_two(c(0, 1), grid[g]));
    } else {
      // Grid point g uses seed + g so rows are independent of each other.
      const MCEstimate est = estimate_partition(c, grid[g], samples, seed + g, iv, opts.threads);
      row.log_z = std::log(est.mean);
      row.log_z_stderr = est.std_error / est.mean;
      row.samples = est.samples;
    }
    sweep.rows.push_back(row);
  }

  if (grid.size() >= 5) {
    const bool down = grid[1] < grid[0];
    const CriticalSide& side = down ? report.minus : report.plus;
    if (side.finite) {
      std::vector<double> lz;
      for (const auto& r : sweep.rows) lz.push_back(r.log_z);
      try {
        sweep.fitted_kappa = pole_order_fit(grid, lz, side.beta);
        sweep.endpoint = side.beta;
        if (side.kappa) sweep.predicted_kappa = *side.kappa;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateGrid) throw;
      }
    }
  }
  return sweep;
}

inline void write_partition_csv(const PartitionSweep& sweep, std::ostream& os) {
  os << "beta,logZ_mean,logZ_stderr,samples,heavy_tail\n";
  os << std::setprecision(17);
  for (const auto& r : sweep.rows)
    os << r.beta << "," << r.log_z << "," << r.log_z_stderr << "," << r.samples << "," << (r.heavy_tail ? "true" : "false")
       << "\n";
  if (sweep.fitted_kappa) {
    os << "# pole_order_fit endpoint=" << *sweep.endpoint << " kappa_estimate=" << *sweep.fitted_kappa;
    if (sweep.predicted_kappa) os << " kappa_predicted=" << *sweep.predicted_kappa;
    os << "\n";
  }
}

struct GibbsSweepRow {
  double beta = 0.0;
  CollapseStats stats;
  ChainSummary chain;
};

inline std::vector<GibbsSweepRow> run_gibbs_sweep(const CouplingMatrix& c, const std::vector<int>& classes,
                                                  const std::vector<double>& grid, std::uint64_t samples,
                                                  std::uint64_t seed, const SolverOptions& opts) {
  if (samples < 1) throw Error(ErrorKind::InvalidInput, "need at least one sample");
  const BetaInterval iv = finiteness_interval(c);
  for (double b : grid)
    if (!iv.contains(b))
      throw Error(ErrorKind::OutsideInterval, "grid point beta = " + format_real(b) + " is outside (" +
                                                  format_real(iv.lower) + ", " + format_real(iv.upper) + ")");
  std::vector<GibbsSweepRow> rows(grid.size());
  parallel_for(grid.size(), worker_count(opts.threads), [&](std::size_t g) {
    ChainParams p;
    p.beta = grid[g];
    p.burn_in = std::max<std::uint64_t>(1000, samples / 10);
    p.steps = p.burn_in + samples;
    p.thin = 1;
    p.seed = seed + g;
    MetropolisChain chain(c, p, iv);
    CollapseAccumulator acc(c, classes);
    rows[g].beta = grid[g];
    rows[g].chain = chain.run(acc);
    rows[g].stats = acc.stats();
  });
  return rows;
}

inline void write_gibbs_csv(const std::vector<GibbsSweepRow>& rows, std::ostream& os) {
  os << "beta,obs_name,q05,q25,q50,q75,q95\n";
  os << std::setprecision(17);
  for (const auto& r : rows)
    for (const auto& o : r.stats.observables) {
      os << r.beta << "," << o.name;
      for (double q : o.q) os << "," << q;
      os << "\n";
    }
  for (const auto& r : rows)
    os << "# beta=" << r.beta << " samples=" << r.stats.samples << " mean_energy=" << r.stats.mean_energy
       << " acceptance_rate=" << r.chain.acceptance_rate << " step_size=" << r.chain.final_step_size << "\n";
}

// ---------------------------------------------------------------------------
// Random ensembles
// ---------------------------------------------------------------------------

struct EnsembleTrial {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double t_plus = 0.0;
  double t_minus = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  // Charge model only.
  double max_k2 = 0.0;
  double sum_k2_minus_min = 0.0;
  int violations = 0;
};

struct EnsembleReport {
  RandomModel model = RandomModel::couplings;
  std::size_t n = 0;
  double variance = 1.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<EnsembleTrial> rows;
  int bound_violations = 0;
};

inline constexpr std::size_t kMaxEnsembleN = 20;

namespace detail {

/// a <= b up to a relative slack for eigenvalue round-off.
inline bool leq(double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace detail

/// Samples `trials` instances (trial t uses seed + t), solves each in float
/// mode and checks every deterministic bound on it.
inline EnsembleReport run_ensemble(const RandomSpec& spec, std::size_t trials, const SolverOptions& base) {
  if (spec.n > kMaxEnsembleN) throw Error(ErrorKind::InstanceTooLarge, "ensemble is limited to n <= 20");
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "need at least one trial");
  EnsembleReport rep;
  rep.model = spec.model;
  rep.n = spec.n;
  rep.variance = spec.variance;
  rep.trials = trials;
  rep.seed = spec.seed;
  rep.rows.resize(trials);
  SolverOptions opts = base;
  opts.mode = ArithmeticMode::floating;
  const unsigned workers = worker_count(base.threads);
  opts.threads = 1;  // parallel over trials instead
  parallel_for(trials, workers, [&](std::size_t t) {
    EnsembleTrial& row = rep.rows[t];
    row.trial = t;
    row.seed = spec.seed + t;
    std::optional<ChargeVector> k;
    CouplingMatrix c;
    if (spec.model == RandomModel::couplings) {
      c = sample_gaussian_couplings(spec.n, spec.variance, row.seed);
    } else {
      k = sample_gaussian_charges(spec.n, row.seed);
      c = from_charges(*k);
    }
    const auto sol = detail::solve_both(c, opts);
    row.t_plus = sol.plus.t_value;
    row.t_minus = sol.minus.t_value;
    const Spectrum s = symmetric_eigs(c);
    row.lambda_min = s.min();
    row.lambda_max = s.max();
    using detail::leq;
    if (row.t_plus > 0.0 && !leq(row.t_plus, -row.lambda_min)) ++row.violations;
    if (row.t_minus < 0.0 && !leq(-row.t_minus, row.lambda_max)) ++row.violations;
    if (k) {
      const BoundReport cb = charge_bounds(*k);
      row.max_k2 = cb.t_plus_upper;
      row.sum_k2_minus_min = -cb.t_minus_lower;
      if (row.t_plus > 0.0 && !leq(row.t_plus, row.max_k2)) ++row.violations;
      if (row.t_minus < 0.0 && !leq(-row.t_minus, row.sum_k2_minus_min)) ++row.violations;
      // The charge formulas relax the eigenvalue bounds and can never beat them.
      if (!leq(-row.lambda_min, row.max_k2)) ++row.violations;
      if (!leq(row.lambda_max, row.sum_k2_minus_min)) ++row.violations;
    }
  });
  for (const auto& r : rep.rows) rep.bound_violations += r.violations;
  return rep;
}

inline ordered_json quantile_summary(const std::vector<double>& v) {
  ordered_json j;
  double mean = 0.0;
  for (double x : v) mean += x;
  j["mean"] = mean / static_cast<double>(v.size());
  const char* names[] = {"q05", "q25", "q50", "q75", "q95"};
  for (std::size_t k = 0; k < kQuantileLevels.size(); ++k) j[names[k]] = quantile(v, kQuantileLevels[k]);
  return j;
}

inline ordered_json ensemble_json(const EnsembleReport& rep) {
  ordered_json j;
  j["schema"] = "loggas.ensemble";
  j["schema_version"] = kSchemaVersion;
  j["model"] = to_string(rep.model);
  j["n"] = rep.n;
  if (rep.model == RandomModel::couplings)
    j["variance"] = rep.variance;
  else
    j["variance"] = nullptr;
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  j["bound_violations"] = rep.bound_violations;

  std::vector<double> tp, tm, lmin, lmax, gumbel;
  std::size_t tp_le_2 = 0, tm_ge_m2 = 0;
  const double n = static_cast<double>(rep.n);
  for (const auto& r : rep.rows) {
    tp.push_back(r.t_plus);
    tm.push_back(r.t_minus);
    lmin.push_back(r.lambda_min);
    lmax.push_back(r.lambda_max);
    tp_le_2 += r.t_plus <= 2.0;
    tm_ge_m2 += r.t_minus >= -2.0;
    if (rep.model == RandomModel::charges)
      gumbel.push_back(2.0 * (r.max_k2 - std::log(n) + std::log(std::log(n)) / 2.0 + std::lgamma(0.5)));
  }
  ordered_json summary;
  summary["t_plus"] = quantile_summary(tp);
  summary["t_minus"] = quantile_summary(tm);
  summary["lambda_min"] = quantile_summary(lmin);
  summary["lambda_max"] = quantile_summary(lmax);
  if (rep.model == RandomModel::couplings) {
    summary["fraction_t_plus_le_2"] = static_cast<double>(tp_le_2) / static_cast<double>(rep.rows.size());
    summary["fraction_t_minus_ge_minus_2"] = static_cast<double>(tm_ge_m2) / static_cast<double>(rep.rows.size());
  } else {
    summary["gumbel_normalized_max_k2"] = quantile_summary(gumbel);
  }
  j["summary"] = summary;

  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.rows) {
    ordered_json row;
    row["trial"] = r.trial;
    row["seed"] = r.seed;
    row["t_plus"] = r.t_plus;
    row["t_minus"] = r.t_minus;
    row["lambda_min"] = r.lambda_min;
    row["lambda_max"] = r.lambda_max;
    if (rep.model == RandomModel::charges) {
      row["max_k2"] = r.max_k2;
      row["sum_k2_minus_min"] = r.sum_k2_minus_min;
    }
    row["violations"] = r.violations;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

enum class Subcommand { critical, bounds, closed_form, arboricity, sk_check, mc_partition, mc_gibbs, ensemble };

inline std::optional<Subcommand> parse_subcommand(const std::string& s) {
  if (s == "critical") return Subcommand::critical;
  if (s == "bounds") return Subcommand::bounds;
  if (s == "closed-form") return Subcommand::closed_form;
  if (s == "arboricity") return Subcommand::arboricity;
  if (s == "sk-check") return Subcommand::sk_check;
  if (s == "mc-partition") return Subcommand::mc_partition;
  if (s == "mc-gibbs") return Subcommand::mc_gibbs;
  if (s == "ensemble") return Subcommand::ensemble;
  return std::nullopt;
}

struct RunConfig {
  Subcommand subcommand = Subcommand::critical;
  std::string input_path;
  std::string output_path;  // empty: stdout
  ArithmeticMode mode = ArithmeticMode::automatic;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  std::string beta_grid;
  std::size_t trials = 200;
  bool text = false;
  PartitionBackend backend = PartitionBackend::monte_carlo;
};

/// Runs one subcommand on a parsed input and writes its output.
inline void run(const RunConfig& cfg, const ParsedInput& in, std::ostream& out) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorKind::InvalidInput, "--tol must be positive");
  SolverOptions opts;
  opts.mode = cfg.mode;
  opts.tie_tolerance = cfg.tol;

  auto emit = [&](const ordered_json& j) {
    if (cfg.text)
      flatten_text(j, "", out);
    else
      out << j.dump(2) << "\n";
  };

  switch (cfg.subcommand) {
    case Subcommand::critical: {
      const CriticalReport r = critical_interval(in.couplings, opts);
      if (cfg.text)
        out << critical_text(r);
      else
        out << critical_json(r).dump(2) << "\n";
      return;
    }
    case Subcommand::bounds:
      emit(bounds_json(in, opts));
      return;
    case Subcommand::closed_form:
      emit(closed_form_json(in));
      return;
    case Subcommand::arboricity:
      emit(arboricity_json(in, opts));
      return;
    case Subcommand::sk_check:
      emit(sk_json(in, opts));
      return;
    case Subcommand::mc_partition: {
      if (cfg.beta_grid.empty()) throw Error(ErrorKind::InvalidInput, "mc-partition needs --beta-grid");
      const auto grid = parse_beta_grid(cfg.beta_grid);
      write_partition_csv(run_partition_sweep(in.couplings, grid, cfg.samples, cfg.seed, cfg.backend, opts), out);
      return;
    }
    case Subcommand::mc_gibbs: {
      if (cfg.beta_grid.empty()) throw Error(ErrorKind::InvalidInput, "mc-gibbs needs --beta-grid");
      const auto grid = parse_beta_grid(cfg.beta_grid);
      write_gibbs_csv(run_gibbs_sweep(in.couplings, in.classes(), grid, cfg.samples, cfg.seed, opts), out);
      return;
    }
    case Subcommand::ensemble: {
      if (!in.random) throw Error(ErrorKind::InvalidInput, "ensemble needs random input");
      emit(ensemble_json(run_ensemble(*in.random, cfg.trials, opts)));
      return;
    }
  }
}

}  // namespace loggas
