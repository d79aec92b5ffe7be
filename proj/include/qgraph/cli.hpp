#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/edge_spectral.hpp"

namespace qg {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDomain = 2,
  kExitPole = 3,
  kExitNumerical = 4,
};

struct RunConfig {
  std::string command;
  std::optional<std::string> graph_path;
  std::optional<std::string> builtin;
  std::vector<std::string> potentials;  // builtin names or potential-record files
  std::vector<std::string> connectors;  // one per layer vertex, or one for all
  cplx lambda{0.0, 0.0};
  int grid = 64;
  int slices = kDefaultSlices;
  double tol = 1e-8;
  double radius = 50.0;
  double lambda_max = 100.0;
  std::optional<std::string> out_path;
};

std::vector<std::string> command_names();

/// Executes one command. Reports go to `out_path` (written atomically) or to
/// `out`; diagnostics go to `err`. Returns an ExitCode value.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs. Usage errors return kExitUsage.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qg
