#pragma once

#include <optional>
#include <vector>

#include "skorokhod/esm.hpp"
#include "skorokhod/geometry.hpp"
#include "skorokhod/paths.hpp"

namespace skorokhod {

struct DpEvent {
  double time = 0.0;
  FaceSet faces;
  bool projected = false;  // the projection moved phi at this time
};

/// Discrete derivative-problem solution on the grid of the constrained path.
/// phi.left(k) is the pre-projection value phi_{k-1} + psi(t_k) - psi(t_{k-1}).
struct DpSolution {
  CadlagStepPath phi;
  CadlagStepPath eta;
  std::vector<FaceSet> faces;
  std::vector<DpEvent> events;
  /// First grid time whose face set is in W; the solution stops before it.
  std::optional<double> tau;

  /// Throws derivative_undefined if the solve stopped at a W point.
  void ensure_complete() const;
};

struct DpOptions {
  double event_tol = 1e-12;
};

/// phi_0 = L_{I_0} psi(0), phi_k = L_{I_k}(phi_{k-1} + psi(t_k) - psi(t_{k-1})),
/// eta = phi - psi, with I_k the producer's face set at t_k.
DpSolution solve_dp(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi,
                    const DpOptions& options = {});

/// Theta_Z regularization: value at 0 replaced by deriv_at_0; at grid times
/// where Z lands on exactly one face i without a push in the step and
/// <phi(t-), n_i> >= -1e-9 the left value is kept, otherwise phi(t). Without
/// recorded push flags, arrival on a new face set stands in for landing.
CadlagStepPath theta_z(const SPData& sp, const DpSolution& sol, const ConstrainedPath& z,
                       const Vec& deriv_at_0);

struct DpResiduals {
  double decomposition = 0.0;       // max |phi - psi - eta|
  double constraint = 0.0;          // max |<phi, n_i>|, i active
  double increment_span = 0.0;      // eta increments outside span d(active)
  double interior_constancy = 0.0;  // eta change on steps with no active face
};

DpResiduals dp_residuals(const SPData& sp, const DpSolution& sol, const ConstrainedPath& z,
                         const PwLinearPath& psi);

/// max over the grid of |solve(a psi1 + b psi2) - (a phi1 + b phi2)|.
double dp_linearity_check(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi1,
                          const PwLinearPath& psi2, double a, double b);

/// Re-solves from grid index s with psi^S = phi(S) + psi(S + .) - psi(S) and
/// returns the max deviation from phi on [S, T].
double dp_timeshift_check(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi,
                          std::size_t s);

/// ||phi1 - phi2||_T / ||psi1 - psi2||_T.
double dp_lipschitz_report(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi1,
                           const PwLinearPath& psi2, double horizon);

}  // namespace skorokhod
