#pragma once

#include <cstdint>
#include <vector>

#include "skorokhod/dp.hpp"
#include "skorokhod/errors.hpp"
#include "skorokhod/esm.hpp"

namespace skorokhod {

/// Reflected Brownian motion data on the nonnegative quadrant. Columns of r are
/// the reflection directions d_1, d_2.
struct RbmParams {
  Vec x = Vec::Zero(2);
  Vec b = Vec::Zero(2);
  Mat sigma = Mat::Identity(2, 2);
  Mat r = Mat::Identity(2, 2);

  /// Throws `failure` (argument by default) naming the violated invariant.
  void validate(ErrorKind failure = ErrorKind::argument) const;
  SPData sp() const;
};

struct Perturbation {
  Vec y = Vec::Zero(2);
  Vec c = Vec::Zero(2);
  Mat theta = Mat::Zero(2, 2);
  Mat v = Mat::Zero(2, 2);

  void validate(const RbmParams& params) const;
  /// params + eps * this.
  RbmParams apply(const RbmParams& params, double eps) const;
};

Perturbation operator+(const Perturbation& a, const Perturbation& b);
Perturbation operator*(double s, const Perturbation& p);

/// Standard normal deviate keyed by (seed, step, component): a counter-based
/// hash gives a uniform in (0,1), mapped through the inverse normal CDF.
double keyed_normal(std::uint64_t seed, std::uint64_t step, std::uint32_t component);

struct SamplePath {
  std::uint64_t seed = 0;
  RbmParams params;
  std::vector<double> grid;
  std::vector<Vec> w;  // Brownian motion at grid times
  PwLinearPath x;
  EspSolution esp;
};

SamplePath simulate_rbm(const RbmParams& params, const std::vector<double>& grid, std::uint64_t seed);

/// psi(t) = y + c t + theta W(t) + V L(t) on the path's grid.
PwLinearPath perturbation_psi(const SamplePath& path, const Perturbation& pert);

struct PathwiseDerivative {
  PwLinearPath psi;
  DpSolution dp;
  CadlagStepPath theta;  // Theta_Z(phi), the derivative at grid times
};

PathwiseDerivative pathwise_derivative(const SamplePath& path, const Perturbation& pert);

/// (Z^eps - Z) / eps at grid times, with Z^eps simulated from the same Brownian
/// increments under the perturbed parameters (including the perturbed R).
std::vector<Vec> fd_derivative(const SamplePath& path, const Perturbation& pert, double eps);

struct FdComparison {
  std::vector<double> eps;
  std::vector<double> error;  // E(eps)
  std::size_t compared = 0;   // grid times outside the event windows
  bool strictly_decreasing = false;
};

/// E(eps) = max over grid times farther than `window` steps from every DP
/// event of |fd(eps) - derivative|.
FdComparison compare_fd(const SamplePath& path, const Perturbation& pert,
                        const PathwiseDerivative& deriv, const std::vector<double>& eps,
                        int window = 1);

/// Same, with finite differences already computed (fd[i] for eps[i]).
FdComparison compare_fd(const SamplePath& path, const PathwiseDerivative& deriv,
                        const std::vector<double>& eps, const std::vector<std::vector<Vec>>& fd,
                        int window = 1);

struct JitterReport {
  std::size_t grid_points = 0;
  std::size_t boundary_touches = 0;
  double constant_y_fraction = 0.0;    // touches with Y constant on both adjacent steps
  double corner_time_fraction = 0.0;   // share of grid time with >= 2 active faces
  std::size_t corner_hits = 0;
  double single_face_before_fraction = 1.0;
  double single_face_after_fraction = 1.0;
};

JitterReport jitter_diagnostics(const SamplePath& path, int window_count = 4);

struct RbmPathResult {
  std::uint64_t seed = 0;
  SamplePath path;
  PathwiseDerivative deriv;
  std::vector<std::vector<Vec>> fd;  // one per eps
  FdComparison comparison;
  JitterReport jitter;
};

/// Runs the full per-path pipeline for every seed; results are ordered by seed
/// regardless of how the work was scheduled.
std::vector<RbmPathResult> run_rbm_batch(const RbmParams& params, const Perturbation& pert,
                                         const std::vector<double>& grid,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::vector<double>& eps, int window_count = 4,
                                         unsigned threads = 0);

}  // namespace skorokhod
