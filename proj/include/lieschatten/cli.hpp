#pragma once

#include "lieschatten/families.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lieschatten {

inline constexpr const char* kVersion = "1.0.0";

enum class OutputFormat { Json, Csv };

/// Parsed command line.
struct RunConfig {
  std::string command;
  std::string group = "su2";
  std::string family = "bessel";  // bessel | laplacian | sublaplacian | identity | zero | carleman
  double alpha = 2;
  double r = 2;
  double s = 0;
  double cutoff = 0;
  std::vector<double> cutoffs = {8, 16, 32, 64};
  std::vector<double> alphas;
  std::vector<double> rs;
  OutputFormat format = OutputFormat::Json;
  std::string output;  // empty: stdout
};

/// The oracle refuses truncations with more basis functions than this.
inline constexpr std::size_t kOracleMaxBasis = 2000;

/// Builds the symbol a config names, truncated at `cutoff`.
InvariantSymbol config_symbol(const RunConfig& cfg, double cutoff);

/// Runs one command; args exclude the program name. Returns the exit code:
/// 0 success, 2 usage error, 3 numerical guard. Output goes to `out` unless
/// --output names a file.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Executes an already parsed config and returns the rendered document.
/// Throws std::invalid_argument or NumericalGuardError.
std::string execute(const RunConfig& cfg);

}  // namespace lieschatten
