#include "blockspec/cli.hpp"

#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "blockspec/density.hpp"
#include "blockspec/montecarlo.hpp"
#include "blockspec/reduced_matrices.hpp"
#include "blockspec/report_io.hpp"

namespace blockspec {

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidAlpha:
    case ErrorCode::kInvalidG:
    case ErrorCode::kInvalidD:
    case ErrorCode::kInvalidStructure:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kNonPositiveMatrix:
    case ErrorCode::kParseError:
    case ErrorCode::kValidationError:
      return kExitConfig;
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNotConverged:
    case ErrorCode::kSolverFailure:
    case ErrorCode::kZeroZOutsideSupport:
      return kExitSolver;
    case ErrorCode::kEigensolverFailure:
      return kExitEigensolver;
    case ErrorCode::kIoError:
      return kExitFailure;
  }
  return kExitFailure;
}

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  file << text;
  if (!file) throw Error(ErrorCode::kIoError, "write to " + path + " failed");
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int run(std::string_view subcommand, RunConfig config, const CliFlags& flags, std::ostream& out,
        std::ostream& err) {
  try {
    if (flags.seed) config.seed = *flags.seed;
    if (flags.trials) config.trials = *flags.trials;
    if (flags.grid_points) config.grid_points = *flags.grid_points;
    if (flags.out) config.output_path = *flags.out;
    config.validate();

    if (subcommand == "validate") {
      out << "ok\n";
    } else if (subcommand == "radius") {
      out << dump(radius_json(build_reduced(config.structure)));
    } else if (subcommand == "density") {
      const RadialDensity density =
          density_grid(config.structure, config.grid_points, config.solver, flags.workers);
      emit(density_csv(density), config.output_path, out);
    } else if (subcommand == "mass") {
      if (!flags.r1 || !flags.r2) {
        throw Error(ErrorCode::kInvalidArgument, "mass needs --r1 and --r2");
      }
      const double mass = annulus_mass(config.structure, *flags.r1, *flags.r2, config.solver);
      out << dump(mass_json(*flags.r1, *flags.r2, mass));
    } else if (subcommand == "sample") {
      const EmpiricalSpectrum spectrum =
          run_trials(config.structure, config.n, config.trials, config.seed, flags.workers);
      emit(eigenvalues_csv(spectrum), config.output_path, out);
    } else if (subcommand == "compare") {
      const EmpiricalSpectrum spectrum =
          run_trials(config.structure, config.n, config.trials, config.seed, flags.workers);
      const ComparisonReport report = compare(spectrum, config.structure, config.solver, flags.workers);
      emit(dump(comparison_json(report, spectrum)), config.output_path, out);
    } else {
      err << "unknown subcommand '" << subcommand << "'\n";
      return kExitFailure;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limiting spectra of block-structured random matrices"};
  app.require_subcommand(1);

  std::string config_path;
  CliFlags flags;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  int grid_points = 0;
  std::string out_path;
  double r1 = 0.0;
  double r2 = 0.0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "Check the configuration"},
      {"radius", "Print the support radius and Perron-Frobenius data as JSON"},
      {"density", "Write the radial density grid as CSV"},
      {"mass", "Print the mass of the annulus r1 <= |z| <= r2 as JSON"},
      {"sample", "Write Monte Carlo eigenvalues as CSV"},
      {"compare", "Write the Monte Carlo vs. theory comparison as JSON"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON configuration file")->required();
    sub->add_option("--seed", seed, "Override the base seed");
    sub->add_option("--trials", trials, "Override the number of trials");
    sub->add_option("--grid-points", grid_points, "Override the density grid size");
    sub->add_option("--out", out_path, "Output file (default: standard output)");
    sub->add_option("--threads", flags.workers, "Worker threads (0: BLOCKSPEC_THREADS or all cores)");
    if (name == "mass") {
      sub->add_option("--r1", r1, "Inner radius")->required();
      sub->add_option("--r2", r2, "Outer radius")->required();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitFailure;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) flags.seed = seed;
  if (chosen->count("--trials")) flags.trials = trials;
  if (chosen->count("--grid-points")) flags.grid_points = grid_points;
  if (chosen->count("--out")) flags.out = out_path;
  if (chosen->get_name() == "mass") {
    flags.r1 = r1;
    flags.r2 = r2;
  }

  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run(chosen->get_name(), std::move(config), flags, out, err);
}

}  // namespace blockspec
