#include "skorokhod/derivproj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "skorokhod/errors.hpp"

namespace skorokhod {

DerivProjection build_projection(const SPData& sp, const FaceSet& faces) {
  faces.check_range(sp.num_faces());
  const int j = sp.dim();
  DerivProjection out;
  out.faces = faces;
  const SubspaceBases b = subspace_bases(sp, faces);
  out.h_basis = b.h_basis;
  out.d_basis = b.d_basis;
  if (faces.empty()) {
    out.p = Mat::Identity(j, j);
    return out;
  }
  const Mat nm = sp.normals_of(faces);
  const Mat dm = sp.directions_of(faces);
  const Mat ntd = nm.transpose() * dm;
  Eigen::JacobiSVD<Mat> small(ntd);
  const Vec ss = small.singularValues();
  const auto k = ss.size();
  if (ss(k - 1) > 0.0 && ss(0) / ss(k - 1) <= 1e12) {
    // N'D invertible: I - D (N'D)^{-1} N'.
    out.p = Mat::Identity(j, j) - dm * ntd.partialPivLu().solve(nm.transpose());
    return out;
  }
  // N'D singular (more faces than independent normals, e.g. a vertex where
  // N > J): fall back to the joint-basis construction y = H a + D b -> H a.
  const auto nh = b.h_basis.cols();
  const auto nd = b.d_basis.cols();
  if (nh + nd != j) {
    throw Error(ErrorKind::w_membership, "H and span d do not decompose R^J for faces {" +
                                             faces.to_string() + "}");
  }
  Mat basis(j, j);
  basis << b.h_basis, b.d_basis;
  Eigen::JacobiSVD<Mat> svd(basis);
  const Vec s = svd.singularValues();
  if (s(j - 1) <= 0.0 || s(0) / s(j - 1) > 1e12) {
    throw Error(ErrorKind::w_membership, "H and span d are (nearly) dependent for faces {" +
                                             faces.to_string() + "}");
  }
  Mat keep = Mat::Zero(j, j);
  keep.leftCols(nh) = b.h_basis;
  out.p = keep * basis.inverse();
  return out;
}

Mat adjoint(const DerivProjection& proj) { return proj.p.transpose(); }

ProjectionResiduals projection_residuals(const SPData& sp, const DerivProjection& proj) {
  ProjectionResiduals r;
  const int j = sp.dim();
  const Mat& p = proj.p;
  const Mat pt = p.transpose();
  r.idempotence = (p * p - p).cwiseAbs().maxCoeff();
  const Mat nm = sp.normals_of(proj.faces);
  const Mat dm = sp.directions_of(proj.faces);
  for (int c = 0; c < j; ++c) {
    const Vec e = Vec::Unit(j, c);
    const Vec py = p * e;
    const Vec pty = pt * e;
    if (nm.cols() > 0) {
      r.range = std::max(r.range, (nm.transpose() * py).cwiseAbs().maxCoeff());
      r.adjoint_range = std::max(r.adjoint_range, (dm.transpose() * pty).cwiseAbs().maxCoeff());
    }
    r.complement = std::max(r.complement, least_squares(dm, Vec(e - py)).residual);
    r.adjoint_complement = std::max(r.adjoint_complement, least_squares(nm, Vec(pty - e)).residual);
  }
  return r;
}

double b_norm(const BPolytope& b, const Vec& y) { return b.norm(y); }

double dual_norm(const BPolytope& b, const Vec& y) { return b.dual_norm(y); }

SetBCheck check_setB(const SPData& sp, const BPolytope& b, double delta) {
  if (b.dim() != sp.dim()) throw Error(ErrorKind::argument, "B dimension mismatch");
  if (!(delta > 0.0)) throw Error(ErrorKind::argument, "delta must be positive");
  SetBCheck out;
  for (int i = 0; i < sp.num_faces(); ++i) {
    const Vec n = sp.normal(i);
    const Vec d = sp.direction(i);
    for (std::size_t f = 0; f < b.facets().size(); ++f) {
      const auto& facet = b.facets()[f];
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (int v : facet.vertices) {
        const double s = n.dot(b.vertices()[static_cast<std::size_t>(v)]);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      // The facet's values of <z, n_i> form [lo, hi]; it meets (-delta, delta)
      // iff lo < delta and hi > -delta. The facet normal belongs to the normal
      // cone at every point of the closed facet.
      if (lo < delta && hi > -delta && std::abs(facet.normal.dot(d)) > 1e-12) {
        out.ok = false;
        std::ostringstream msg;
        msg << "face " << i + 1 << ": facet with normal (" << facet.normal.transpose()
            << ") reaches |<z,n_i>| < delta but <nu,d_i> = " << facet.normal.dot(d);
        out.violations.push_back(msg.str());
      }
    }
  }
  return out;
}

CompositionResult composition_limit(const SPData& sp, const std::vector<FaceSet>& face_sequence,
                                    const FaceSet& target, const Vec& y, int max_iter, double tol) {
  if (face_sequence.empty()) throw Error(ErrorKind::argument, "face sequence is empty");
  std::vector<DerivProjection> projs;
  projs.reserve(face_sequence.size());
  for (const FaceSet& f : face_sequence) projs.push_back(build_projection(sp, f));
  const DerivProjection tp = build_projection(sp, target);
  CompositionResult out;
  out.target_value = tp.apply(y);
  Vec cur = y;
  double prev_move = -1.0;
  for (int c = 1; c <= max_iter; ++c) {
    Vec next = cur;
    for (const DerivProjection& p : projs) next = p.apply(next);
    const double move = (next - cur).norm();
    if (prev_move > 0.0 && move > 0.0) {
      const double factor = move / prev_move;
      out.cycle_factors.push_back(factor);
      out.contraction_factor = std::max(out.contraction_factor, factor);
    }
    prev_move = move;
    cur = next;
    out.cycles = c;
    if (move < tol) {
      out.limit = cur;
      const double gap = (cur - out.target_value).cwiseAbs().maxCoeff();
      if (gap > 10.0 * tol * std::max(1.0, y.norm())) {
        throw Error(ErrorKind::convergence,
                    "cyclic projections settled away from L_target y (gap " + std::to_string(gap) + ")");
      }
      return out;
    }
  }
  throw Error(ErrorKind::convergence,
              "cyclic projections did not settle within " + std::to_string(max_iter) + " cycles");
}

double cycle_contraction(const SPData& sp, const std::vector<FaceSet>& face_sequence,
                         const FaceSet& target, const BPolytope& b, int samples, unsigned seed) {
  Mat m = Mat::Identity(sp.dim(), sp.dim());
  for (const FaceSet& f : face_sequence) m = m * adjoint(build_projection(sp, f));
  const Mat hperp = range_basis(sp.normals_of(target));
  if (hperp.cols() == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec a(hperp.cols());
    for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = gauss(rng);
    const Vec y = hperp * a;
    const double den = b.dual_norm(y);
    if (den > 0.0) worst = std::max(worst, b.dual_norm(m * y) / den);
  }
  return worst;
}

}  // namespace skorokhod
