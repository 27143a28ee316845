#pragma once

#include <string>
#include <vector>

#include "skorokhod/geometry.hpp"

namespace skorokhod {

/// Oblique projection L_x onto H_x along span d(x) for the face set of x.
struct DerivProjection {
  FaceSet faces;
  Mat p;
  Mat h_basis;
  Mat d_basis;

  Vec apply(const Vec& y) const { return p * y; }
};

/// Throws w_membership when H_x and span d(x) do not form a direct sum
/// decomposition of R^J (condition number of the joint basis above 1e12).
DerivProjection build_projection(const SPData& sp, const FaceSet& faces);

/// Transpose of P: the matrix of L_x^*.
Mat adjoint(const DerivProjection& proj);

struct ProjectionResiduals {
  double idempotence = 0.0;  // max |P^2 - P|
  double range = 0.0;        // max |<P e_j, n_i>|, i in faces
  double complement = 0.0;   // least-squares residual of (I - P) e_j in span d
  double adjoint_range = 0.0;       // max |<P' e_j, d_i>|
  double adjoint_complement = 0.0;  // residual of (P' - I) e_j in span{n_i}
};

ProjectionResiduals projection_residuals(const SPData& sp, const DerivProjection& proj);

double b_norm(const BPolytope& b, const Vec& y);
double dual_norm(const BPolytope& b, const Vec& y);

struct SetBCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks |<z, n_i>| < delta => <nu, d_i> = 0 for every z on the boundary of
/// B and every normal nu at z, exactly over the facets of B.
SetBCheck check_setB(const SPData& sp, const BPolytope& b, double delta);

struct CompositionResult {
  Vec limit;
  Vec target_value;
  int cycles = 0;
  double contraction_factor = 0.0;     // max ratio of successive cycle displacements
  std::vector<double> cycle_factors;
};

/// Iterates y <- L_{faces_k} y through the cyclic face sequence until a full
/// cycle moves y by less than tol; throws convergence if max_iter cycles do not
/// suffice or if the limit differs from L_target y by more than 10 tol.
CompositionResult composition_limit(const SPData& sp, const std::vector<FaceSet>& face_sequence,
                                    const FaceSet& target, const Vec& y, int max_iter = 200,
                                    double tol = 1e-12);

/// Empirical delta of the uniform cycle contraction: max over sampled
/// y in H_target^perp of |L*_{x_1} ... L*_{x_K} y|_{B*} / |y|_{B*}.
double cycle_contraction(const SPData& sp, const std::vector<FaceSet>& face_sequence,
                         const FaceSet& target, const BPolytope& b, int samples = 4096,
                         unsigned seed = 1);

}  // namespace skorokhod
