#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace skorokhod {

struct Tolerances {
  double face = 1e-9;
  double esm = 1e-9;           // Z = X + Y, Z in G, Y = R L
  double dp = 1e-9;            // DP conditions, jump inclusion
  double decomposition = 1e-6; // per-step residual of Y = R L
  double projection = 1e-10;   // P^2 = P and range/complement residuals
  double closed_form = 1e-12;  // fixture tables
};

struct RunConfig {
  std::string subcommand;
  std::string sp_path;
  std::string params_path;
  std::string pert_path;
  std::string b_path;
  std::string path_csv;
  std::string path2_csv;
  std::string z_csv;
  std::string trace_csv;
  std::string psi_csv;
  double grid_dt = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 1;
  int num_seeds = 1;
  std::vector<double> eps;
  std::string out_dir;
  int k_max = 10;
  std::string faces;
  std::vector<double> y;
  std::string sequence;
  int window_count = 4;
  unsigned threads = 0;
  Tolerances tol;

  /// Throws argument errors for inconsistent settings.
  void validate() const;
};

/// Output directory used when --out is not given: $SKOROKHOD_OUT_DIR or ".".
std::string default_out_dir();

/// Runs one subcommand. Returns 0 when every emitted residual is within its
/// tolerance, 1 when some residual is not, 2 on error (after writing an error
/// JSON to `err` and, when possible, to <out>/error.json).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace skorokhod
