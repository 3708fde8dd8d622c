#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qcurv/report.hpp"
#include "qcurv/ucurve.hpp"

namespace qcurv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 1;
inline constexpr int kExitConfig = 2;

struct RunConfig {
  std::string command;  // indicial kernel solve sweep ucurve expand verify
  std::string check;    // verify target: bessel covariance asymptotics
  int n = 5;
  std::optional<double> alpha;
  std::optional<std::string> preset;  // A, D2, P
  std::optional<std::array<double, 3>> gammas;
  std::optional<double> r_max;  // 12, or 18 for U problems
  std::size_t points = 4096;
  double r_in = 1;
  std::vector<double> amplitudes{1e-3};
  std::string curvature = "hyperbolic";  // hyperbolic | constant:<value> | bump:<delta> | bump:auto
  double nu = -1;                        // negative: 0.4 (n-1)
  double epsilon = 1e-3;
  double tol = 1e-10;
  int max_iter = 50;
  int pairs = 10;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
  std::string format = "json";
  std::filesystem::path out_dir = ".";

  // the U problem is selected by --alpha, --preset or --gammas
  bool u_case() const { return alpha || preset || gammas; }
  double u_alpha() const;
  DetParams det_params() const;
  double grid_r_max() const;
};

// CLI flags override keys of the optional JSON file given by --config.
// Throws ConfigError (or DimensionError) on invalid input.
RunConfig parse_config(const std::vector<std::string>& args);

// Echo of the configuration written into every report.
Json config_json(const RunConfig& cfg);

// Runs the command and writes <out_dir>/<name>.json or .csv. Returns the exit code.
int execute(const RunConfig& cfg, std::ostream& out);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcurv
