#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "blockspec/config.hpp"

namespace blockspec {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // usage or I/O problems
  kExitConfig = 2,
  kExitSolver = 3,
  kExitEigensolver = 4,
};

struct CliFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<int> grid_points;
  std::optional<std::string> out;
  std::optional<double> r1;
  std::optional<double> r2;
  unsigned workers = 0;  // 0: BLOCKSPEC_THREADS or hardware concurrency
};

ExitCode exit_code_for(ErrorCode code);

/// Runs one subcommand (validate, radius, density, mass, sample, compare).
/// Small JSON results go to `out`; CSV and comparison reports go to the output
/// path when one is set, else to `out`. Diagnostics go to `err`.
int run(std::string_view subcommand, RunConfig config, const CliFlags& flags, std::ostream& out,
        std::ostream& err);

/// Full command line: argument parsing, config loading, dispatch.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blockspec
