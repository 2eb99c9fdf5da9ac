#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "loggas/cli_reports.hpp"

namespace {

int fail(int code, const std::string& msg) {
  std::cerr << "loggas: " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical temperatures and collapse diagnostics for log gases"};
  app.require_subcommand(1);

  loggas::RunConfig cfg;
  std::string mode = "auto";
  std::string format = "json";
  std::string backend = "mc";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path, "input JSON document")->required();
    sub->add_option("--out", cfg.output_path, "output file (default stdout)");
    sub->add_option("--mode", mode, "arithmetic mode")->check(CLI::IsMember({"auto", "exact", "float"}));
    sub->add_option("--tol", cfg.tol, "relative tie tolerance (float mode)");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  };
  auto add_sweep = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--samples", cfg.samples, "samples per grid point");
    sub->add_option("--beta-grid", cfg.beta_grid, "a:b:steps or comma-separated list")->required();
  };

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"critical", "critical interval, optimizers, nests and limiting support"},
      {"bounds", "eigenvalue and charge bounds on the critical interval"},
      {"closed-form", "two-component plasma or point-vortex closed forms"},
      {"arboricity", "graph arboricity via the subset-ratio solver"},
      {"sk-check", "{0,1}-spin ground-state identity"},
      {"mc-partition", "Monte Carlo partition-function sweep (CSV)"},
      {"mc-gibbs", "Metropolis collapse observables sweep (CSV)"},
      {"ensemble", "random-instance bound checks"},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    const std::string name = e.name;
    if (name == "mc-partition" || name == "mc-gibbs") add_sweep(sub);
    if (name == "mc-partition")
      sub->add_option("--backend", backend, "partition backend")->check(CLI::IsMember({"mc", "analytic"}));
    if (name == "ensemble") sub->add_option("--trials", cfg.trials, "number of sampled instances");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  cfg.subcommand = *loggas::parse_subcommand(app.get_subcommands().front()->get_name());
  cfg.mode = mode == "exact"   ? loggas::ArithmeticMode::exact
             : mode == "float" ? loggas::ArithmeticMode::floating
                               : loggas::ArithmeticMode::automatic;
  cfg.text = format == "text";
  cfg.backend = backend == "analytic" ? loggas::PartitionBackend::analytic : loggas::PartitionBackend::monte_carlo;

  try {
    const loggas::ParsedInput in = loggas::read_input_file(cfg.input_path);
    // Buffer so a failing run leaves no partial output file.
    std::ostringstream buf;
    loggas::run(cfg, in, buf);
    if (cfg.output_path.empty()) {
      std::cout << buf.str();
    } else {
      std::ofstream f(cfg.output_path);
      if (!f) return fail(2, "cannot open output file " + cfg.output_path);
      f << buf.str();
    }
  } catch (const loggas::Error& e) {
    return fail(loggas::exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
  return 0;
}
