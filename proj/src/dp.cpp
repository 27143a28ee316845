#include "skorokhod/dp.hpp"

#include <algorithm>
#include <map>

#include "skorokhod/derivproj.hpp"
#include "skorokhod/errors.hpp"

namespace skorokhod {

void DpSolution::ensure_complete() const {
  if (tau) {
    throw Error(ErrorKind::derivative_undefined,
                "constrained path reaches a W point at t = " + std::to_string(*tau) +
                    "; the directional derivative need not exist from there on");
  }
}

namespace {

class ProjectionCache {
 public:
  explicit ProjectionCache(const SPData& sp) : sp_(sp) {}

  const DerivProjection& get(const FaceSet& faces) {
    auto it = cache_.find(faces.indices());
    if (it == cache_.end()) it = cache_.emplace(faces.indices(), build_projection(sp_, faces)).first;
    return it->second;
  }

 private:
  const SPData& sp_;
  std::map<std::vector<int>, DerivProjection> cache_;
};

}  // namespace

DpSolution solve_dp(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi,
                    const DpOptions& options) {
  const auto& grid = z.grid();
  if (z.faces.size() != grid.size()) throw Error(ErrorKind::argument, "face trace does not match grid");
  if (psi.dim() != sp.dim()) throw Error(ErrorKind::argument, "psi dimension mismatch");
  ProjectionCache cache(sp);
  std::vector<double> times;
  std::vector<Vec> phi, phi_left, eta, eta_left;
  DpSolution sol;
  Vec psi_prev;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const FaceSet& faces = z.faces[k];
    const Vec psi_k = psi(grid[k]);
    const Vec pre = k == 0 ? psi_k : Vec(phi.back() + (psi_k - psi_prev));
    const DerivProjection* proj = nullptr;
    try {
      proj = &cache.get(faces);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::w_membership) throw;
      if (k == 0) {
        throw Error(ErrorKind::derivative_undefined, "constrained path starts at a W point");
      }
      sol.tau = grid[k];
      break;
    }
    const Vec cur = proj->apply(pre);
    const bool projected = (cur - pre).cwiseAbs().maxCoeff() > options.event_tol * (1.0 + pre.cwiseAbs().maxCoeff());
    const bool changed = k == 0 ? !faces.empty() : !(faces == z.faces[k - 1]);
    if (changed) sol.events.push_back({grid[k], faces, projected});
    times.push_back(grid[k]);
    phi_left.push_back(pre);
    phi.push_back(cur);
    eta_left.push_back(k == 0 ? Vec(cur - psi_k) : eta.back());
    eta.push_back(cur - psi_k);
    sol.faces.push_back(faces);
    psi_prev = psi_k;
  }
  sol.phi = CadlagStepPath(times, std::move(phi), std::move(phi_left));
  sol.eta = CadlagStepPath(std::move(times), std::move(eta), std::move(eta_left));
  return sol;
}

CadlagStepPath theta_z(const SPData& sp, const DpSolution& sol, const ConstrainedPath& z,
                       const Vec& deriv_at_0) {
  const std::size_t m = sol.phi.size();
  std::vector<Vec> values(m);
  std::vector<Vec> left(m);
  for (std::size_t k = 0; k < m; ++k) {
    left[k] = sol.phi.left(k);
    values[k] = sol.phi.value(k);
    if (k == 0) {
      values[k] = deriv_at_0;
      continue;
    }
    // The pre-projection value is the left limit only where Z reached the face
    // at t_k without being pushed during the step; inside a pushing stretch
    // phi is continuous and phi(t_k) is kept.
    const FaceSet& faces = z.faces[k];
    if (faces.size() != 1) continue;
    const bool landed = z.pushed.empty() ? !(faces == z.faces[k - 1]) : !z.pushed[k];
    if (landed && sp.normal(faces.indices().front()).dot(left[k]) >= -1e-9) values[k] = left[k];
  }
  return CadlagStepPath(sol.phi.times(), std::move(values), std::move(left));
}

DpResiduals dp_residuals(const SPData& sp, const DpSolution& sol, const ConstrainedPath& z,
                         const PwLinearPath& psi) {
  DpResiduals r;
  for (std::size_t k = 0; k < sol.phi.size(); ++k) {
    const double t = sol.phi.times()[k];
    const Vec& phi = sol.phi.value(k);
    const Vec& eta = sol.eta.value(k);
    r.decomposition = std::max(r.decomposition, (phi - psi(t) - eta).cwiseAbs().maxCoeff());
    const FaceSet& faces = z.faces[k];
    for (int i : faces) r.constraint = std::max(r.constraint, std::abs(sp.normal(i).dot(phi)));
    const Vec inc = k == 0 ? eta : Vec(eta - sol.eta.value(k - 1));
    r.increment_span = std::max(r.increment_span, least_squares(sp.directions_of(faces), inc).residual);
    if (faces.empty() && k > 0) {
      r.interior_constancy = std::max(r.interior_constancy, inc.cwiseAbs().maxCoeff());
    }
  }
  return r;
}

double dp_linearity_check(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi1,
                          const PwLinearPath& psi2, double a, double b) {
  const DpSolution s1 = solve_dp(sp, z, psi1);
  const DpSolution s2 = solve_dp(sp, z, psi2);
  const DpSolution s = solve_dp(sp, z, linear_combination(a, psi1, b, psi2));
  double r = 0.0;
  const std::size_t m = std::min({s.phi.size(), s1.phi.size(), s2.phi.size()});
  for (std::size_t k = 0; k < m; ++k) {
    const Vec expect = a * s1.phi.value(k) + b * s2.phi.value(k);
    r = std::max(r, (s.phi.value(k) - expect).cwiseAbs().maxCoeff());
  }
  return r;
}

double dp_timeshift_check(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi,
                          std::size_t s) {
  const auto& grid = z.grid();
  if (s >= grid.size()) throw Error(ErrorKind::argument, "shift index beyond grid");
  const DpSolution sol = solve_dp(sp, z, psi);
  if (s >= sol.phi.size()) throw Error(ErrorKind::argument, "shift index beyond solved range");
  const double big_s = grid[s];
  std::vector<double> t;
  std::vector<Vec> v;
  std::vector<FaceSet> f;
  std::vector<bool> pushed;
  for (std::size_t k = s; k < grid.size(); ++k) {
    t.push_back(grid[k] - big_s);
    v.push_back(z.z.value(k));
    f.push_back(z.faces[k]);
    if (!z.pushed.empty()) pushed.push_back(k == s ? false : bool(z.pushed[k]));
  }
  const ConstrainedPath zs{PwLinearPath(std::move(t), std::move(v)), std::move(f), std::move(pushed)};
  const DpSolution shifted = solve_dp(sp, zs, time_shift(psi, big_s, sol.phi.value(s)));
  double r = 0.0;
  for (std::size_t j = 0; j < shifted.phi.size() && s + j < sol.phi.size(); ++j) {
    r = std::max(r, (shifted.phi.value(j) - sol.phi.value(s + j)).cwiseAbs().maxCoeff());
  }
  return r;
}

double dp_lipschitz_report(const SPData& sp, const ConstrainedPath& z, const PwLinearPath& psi1,
                           const PwLinearPath& psi2, double horizon) {
  const double den = sup_norm(psi1 - psi2, horizon);
  if (!(den > 0.0)) throw Error(ErrorKind::argument, "dp_lipschitz_report needs distinct psi");
  const DpSolution s1 = solve_dp(sp, z, psi1);
  const DpSolution s2 = solve_dp(sp, z, psi2);
  double num = 0.0;
  for (std::size_t k = 0; k < std::min(s1.phi.size(), s2.phi.size()); ++k) {
    if (s1.phi.times()[k] > horizon) break;
    num = std::max(num, (s1.phi.value(k) - s2.phi.value(k)).norm());
  }
  return num / den;
}

}  // namespace skorokhod
