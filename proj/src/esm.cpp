#include "skorokhod/esm.hpp"

#include <algorithm>
#include <cmath>

#include "skorokhod/errors.hpp"

namespace skorokhod {

namespace {

double face_tolerance(double tol, const Vec& z) { return tol * (1.0 + z.cwiseAbs().maxCoeff()); }

}  // namespace

EspSolution solve_esm(const SPData& sp, const PwLinearPath& x, const std::vector<double>& grid,
                      const EsmOptions& options) {
  if (grid.empty()) throw Error(ErrorKind::argument, "solve_esm needs a nonempty grid");
  if (x.dim() != sp.dim()) throw Error(ErrorKind::argument, "input path dimension mismatch");
  EspSolution sol;
  sol.grid = merge_times(grid, x.times());
  if (sol.grid.front() != 0.0) sol.grid = merge_times({0.0}, sol.grid);
  const std::size_t m = sol.grid.size();
  std::vector<Vec> xs(m), zs(m), ys(m);
  sol.face_trace.resize(m);
  sol.pushed.resize(m);
  for (std::size_t k = 0; k < m; ++k) xs[k] = x(sol.grid[k]);
  for (std::size_t k = 0; k < m; ++k) {
    const Vec pre = k == 0 ? xs[0] : Vec(zs[k - 1] + (xs[k] - xs[k - 1]));
    zs[k] = project_pi(sp, pre);
    sol.pushed[k] = zs[k] != pre;
  }
  for (std::size_t k = 0; k < m; ++k) {
    ys[k] = zs[k] - xs[k];
    sol.face_trace[k] = active_faces(sp, zs[k], face_tolerance(options.face_tol, zs[k]));
  }
  sol.x = PwLinearPath(sol.grid, std::move(xs));
  sol.z = PwLinearPath(sol.grid, std::move(zs));
  sol.y = PwLinearPath(sol.grid, std::move(ys));
  if (options.decompose) {
    sol.l = decompose_local_times(sp, sol.z, sol.y, sol.face_trace, options.decomposition_tol);
  }
  return sol;
}

PwLinearPath decompose_local_times(const SPData& sp, const PwLinearPath& z, const PwLinearPath& y,
                                   const std::vector<FaceSet>& face_trace, double tol) {
  const std::size_t m = z.size();
  if (y.size() != m || face_trace.size() != m) {
    throw Error(ErrorKind::argument, "Z, Y and face trace must share the grid");
  }
  const int n = sp.num_faces();
  std::vector<Vec> ls(m, Vec::Zero(n));
  for (std::size_t k = 0; k < m; ++k) {
    const Vec dy = k == 0 ? y.value(0) : Vec(y.value(k) - y.value(k - 1));
    Vec inc = Vec::Zero(n);
    if (dy.cwiseAbs().maxCoeff() > 0.0) {
      const FaceSet& faces = face_trace[k];
      const ConeExpansion ce = expand_in_directions(sp, faces, dy);
      if (ce.residual > tol) {
        throw Error(ErrorKind::decomposition,
                    "Y increment at t = " + std::to_string(z.times()[k]) +
                        " is not spanned by the active directions (residual " +
                        std::to_string(ce.residual) + ")");
      }
      Eigen::Index j = 0;
      for (int i : faces) {
        double c = ce.coef(j++);
        if (c < -1e-9) {
          throw Error(ErrorKind::decomposition,
                      "negative local-time increment " + std::to_string(c) + " on face " +
                          std::to_string(i + 1) + " at t = " + std::to_string(z.times()[k]));
        }
        inc(i) = std::max(c, 0.0);
      }
    }
    ls[k] = k == 0 ? inc : Vec(ls[k - 1] + inc);
  }
  return PwLinearPath(z.times(), std::move(ls));
}

EsmResiduals esm_residuals(const SPData& sp, const EspSolution& sol) {
  EsmResiduals r;
  const Mat& rm = sp.directions();
  for (std::size_t k = 0; k < sol.grid.size(); ++k) {
    const Vec& z = sol.z.value(k);
    r.identity = std::max(r.identity, (z - sol.x.value(k) - sol.y.value(k)).cwiseAbs().maxCoeff());
    r.domain = std::max(r.domain, std::max(0.0, -sp.slack(z)));
    if (sol.l) {
      const Vec& l = sol.l->value(k);
      r.ry = std::max(r.ry, (sol.y.value(k) - rm * l).cwiseAbs().maxCoeff());
      const Vec dl = k == 0 ? l : Vec(l - sol.l->value(k - 1));
      for (int i = 0; i < sp.num_faces(); ++i) {
        r.monotonicity = std::max(r.monotonicity, std::max(0.0, -dl(i)));
        if (!sol.face_trace[k].contains(i)) r.complementarity = std::max(r.complementarity, std::abs(dl(i)));
      }
    }
  }
  return r;
}

namespace {

std::vector<double> common_grid(const PwLinearPath& x1, const PwLinearPath& x2, double horizon,
                                const std::vector<double>& grid) {
  std::vector<double> g = merge_times(merge_times(grid, x1.times()), x2.times());
  g.erase(std::remove_if(g.begin(), g.end(), [&](double t) { return t > horizon; }), g.end());
  if (g.empty() || g.back() < horizon) g.push_back(horizon);
  return g;
}

}  // namespace

double lipschitz_report(const SPData& sp, const PwLinearPath& x1, const PwLinearPath& x2, double horizon,
                        const std::vector<double>& grid) {
  const auto g = common_grid(x1, x2, horizon, grid);
  EsmOptions opt;
  opt.decompose = false;
  const EspSolution s1 = solve_esm(sp, x1, g, opt);
  const EspSolution s2 = solve_esm(sp, x2, g, opt);
  const double dx = sup_norm(s1.x - s2.x, horizon);
  if (!(dx > 0.0)) throw Error(ErrorKind::argument, "lipschitz_report needs distinct inputs");
  return sup_norm(s1.z - s2.z, horizon) / dx;
}

double local_time_lipschitz_report(const SPData& sp, const PwLinearPath& x1, const PwLinearPath& x2,
                                   double horizon, const std::vector<double>& grid) {
  const auto g = common_grid(x1, x2, horizon, grid);
  const EspSolution s1 = solve_esm(sp, x1, g);
  const EspSolution s2 = solve_esm(sp, x2, g);
  const double dx = sup_norm(s1.x - s2.x, horizon);
  if (!(dx > 0.0)) throw Error(ErrorKind::argument, "local_time_lipschitz_report needs distinct inputs");
  return sup_norm(*s1.l - *s2.l, horizon) / dx;
}

std::optional<double> projected_lipschitz_check(const SPData& sp, const PwLinearPath& x1,
                                                const PwLinearPath& x2, const FaceSet& faces,
                                                double horizon, const std::vector<double>& grid) {
  faces.check_range(sp.num_faces());
  if (faces.empty()) return std::nullopt;
  const auto g = common_grid(x1, x2, horizon, grid);
  EsmOptions opt;
  opt.decompose = false;
  const EspSolution s1 = solve_esm(sp, x1, g, opt);
  const EspSolution s2 = solve_esm(sp, x2, g, opt);
  for (const EspSolution* s : {&s1, &s2}) {
    for (std::size_t k = 0; k < s->grid.size(); ++k) {
      if (!s->face_trace[k].is_subset_of(faces)) {
        throw Error(ErrorKind::trace, "face trace leaves {" + faces.to_string() + "} at t = " +
                                          std::to_string(s->grid[k]));
      }
    }
  }
  const Mat q = range_basis(sp.normals_of(faces));
  const Mat proj = q * q.transpose();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < s1.grid.size(); ++k) {
    num = std::max(num, (proj * (s1.z.value(k) - s2.z.value(k))).norm());
    den = std::max(den, (proj * (s1.x.value(k) - s2.x.value(k))).norm());
  }
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

double esm_timeshift_residual(const SPData& sp, const EspSolution& sol, std::size_t s) {
  if (s >= sol.grid.size()) throw Error(ErrorKind::argument, "shift index beyond grid");
  const double big_s = sol.grid[s];
  const PwLinearPath xs = time_shift(sol.x, big_s, sol.z.value(s));
  std::vector<double> g;
  for (std::size_t k = s; k < sol.grid.size(); ++k) g.push_back(sol.grid[k] - big_s);
  EsmOptions opt;
  opt.decompose = false;
  const EspSolution shifted = solve_esm(sp, xs, g, opt);
  double r = 0.0;
  for (std::size_t k = s; k < sol.grid.size(); ++k) {
    r = std::max(r, (shifted.z(sol.grid[k] - big_s) - sol.z.value(k)).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace skorokhod
