#include <algorithm>
#include <cmath>

#include "skorokhod/errors.hpp"
#include "skorokhod/geometry.hpp"

namespace skorokhod {

BPolytope::BPolytope(std::vector<Vec> vertices) : dim_(0), vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error(ErrorKind::argument, "B needs at least one vertex");
  dim_ = static_cast<int>(vertices_.front().size());
  double scale = 0.0;
  for (const Vec& v : vertices_) {
    if (v.size() != dim_) throw Error(ErrorKind::argument, "B vertex dimension mismatch");
    scale = std::max(scale, v.cwiseAbs().maxCoeff());
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  for (const Vec& v : vertices_) {
    const bool mirrored = std::any_of(vertices_.begin(), vertices_.end(), [&](const Vec& w) {
      return (v + w).cwiseAbs().maxCoeff() <= tol;
    });
    if (!mirrored) throw Error(ErrorKind::argument, "B is not symmetric: -v missing for some vertex");
  }

  // Brute-force facet enumeration: every J-subset of vertices whose affine hull
  // is a hyperplane supporting all vertices gives a facet.
  const int nv = static_cast<int>(vertices_.size());
  for_each_combination(nv, dim_, [&](const std::vector<int>& pick) {
    Mat diffs(dim_, dim_ - 1);
    for (int j = 1; j < dim_; ++j) {
      diffs.col(j - 1) = vertices_[static_cast<std::size_t>(pick[static_cast<std::size_t>(j)])] -
                         vertices_[static_cast<std::size_t>(pick[0])];
    }
    const Mat comp = orthogonal_complement(diffs, dim_);
    if (comp.cols() != 1) return true;
    Vec a = comp.col(0);
    double b = a.dot(vertices_[static_cast<std::size_t>(pick[0])]);
    if (std::abs(b) <= tol) return true;  // hyperplane through 0
    if (b < 0) {
      a = -a;
      b = -b;
    }
    for (const Vec& v : vertices_) {
      if (a.dot(v) > b + tol) return true;
    }
    for (const Facet& f : facets_) {
      if ((f.normal - a).cwiseAbs().maxCoeff() <= 1e-10) return true;
    }
    Facet f{a, b, {}};
    for (int k = 0; k < nv; ++k) {
      if (std::abs(a.dot(vertices_[static_cast<std::size_t>(k)]) - b) <= tol) f.vertices.push_back(k);
    }
    facets_.push_back(std::move(f));
    return true;
  });
  if (facets_.size() < static_cast<std::size_t>(dim_ + 1)) {
    throw Error(ErrorKind::argument, "B is degenerate: 0 is not an interior point");
  }
}

double BPolytope::norm(const Vec& y) const {
  double r = 0.0;
  for (const Facet& f : facets_) r = std::max(r, f.normal.dot(y) / f.offset);
  return r;
}

double BPolytope::dual_norm(const Vec& y) const {
  double r = 0.0;
  for (const Vec& v : vertices_) r = std::max(r, y.dot(v));
  return r;
}

}  // namespace skorokhod
