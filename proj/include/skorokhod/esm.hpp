#pragma once

#include <optional>
#include <vector>

#include "skorokhod/geometry.hpp"
#include "skorokhod/paths.hpp"

namespace skorokhod {

/// A constrained path on its solver grid together with the face set that the
/// producer assigned to every grid time. The DP solver consumes this and never
/// re-detects faces itself.
struct ConstrainedPath {
  PwLinearPath z;
  std::vector<FaceSet> faces;
  /// pushed[k]: the step into t_k moved the point (k = 0: pi(X(0)) != X(0)).
  /// Empty when the producer did not record it.
  std::vector<bool> pushed;

  const std::vector<double>& grid() const noexcept { return z.times(); }
};

struct EspSolution {
  PwLinearPath x;  // input sampled on the solver grid
  PwLinearPath z;
  PwLinearPath y;
  std::optional<PwLinearPath> l;
  std::vector<double> grid;
  /// face_trace[k]: active set at Z(t_k); for k >= 1 it is also the set of
  /// faces the k-th step may push along.
  std::vector<FaceSet> face_trace;
  std::vector<bool> pushed;

  ConstrainedPath constrained() const { return {z, face_trace, pushed}; }
};

struct EsmOptions {
  double face_tol = 1e-9;
  bool decompose = true;
  double decomposition_tol = 1e-6;
};

/// pi-stepping scheme: Z_0 = pi(X(0)), Z_k = pi(Z_{k-1} + X(t_k) - X(t_{k-1})).
/// The grid is merged with the breakpoints of X.
EspSolution solve_esm(const SPData& sp, const PwLinearPath& x, const std::vector<double>& grid,
                      const EsmOptions& options = {});

/// Per-step expansion of the increments of Y in the directions of the step's
/// faces; returns the cumulative local times L (N components).
PwLinearPath decompose_local_times(const SPData& sp, const PwLinearPath& z, const PwLinearPath& y,
                                   const std::vector<FaceSet>& face_trace, double tol = 1e-6);

struct EsmResiduals {
  double identity = 0.0;         // max |Z - X - Y|
  double domain = 0.0;           // max violation of <Z, n_i> >= c_i
  double ry = 0.0;               // max |Y - R L| (0 without L)
  double complementarity = 0.0;  // max increment of L^i on steps where i is inactive
  double monotonicity = 0.0;     // max decrease of any L^i
};

EsmResiduals esm_residuals(const SPData& sp, const EspSolution& sol);

/// ||Z1 - Z2||_T / ||X1 - X2||_T with both inputs solved on a common grid.
double lipschitz_report(const SPData& sp, const PwLinearPath& x1, const PwLinearPath& x2, double horizon,
                        const std::vector<double>& grid);

/// ||L1 - L2||_T / ||X1 - X2||_T.
double local_time_lipschitz_report(const SPData& sp, const PwLinearPath& x1, const PwLinearPath& x2,
                                   double horizon, const std::vector<double>& grid);

/// Ratio of sup-norms after orthogonal projection onto span{n_i, i in faces}.
/// Returns nullopt when the projection is zero (faces empty or identical
/// projected inputs). Throws a trace error if a solution leaves `faces`.
std::optional<double> projected_lipschitz_check(const SPData& sp, const PwLinearPath& x1,
                                                const PwLinearPath& x2, const FaceSet& faces,
                                                double horizon, const std::vector<double>& grid);

/// Re-solves from grid index s with X^S = Z(S) + X(S + .) - X(S) and returns
/// the max deviation from the original Z at shared grid points.
double esm_timeshift_residual(const SPData& sp, const EspSolution& sol, std::size_t s);

}  // namespace skorokhod
