#include "skorokhod/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/math/special_functions/erf.hpp>

namespace skorokhod {

// ---------------------------------------------------------------- parameters

void RbmParams::validate(ErrorKind failure) const {
  if (x.size() != 2 || b.size() != 2 || sigma.rows() != 2 || sigma.cols() != 2 || r.rows() != 2 ||
      r.cols() != 2) {
    throw Error(ErrorKind::argument, "RBM parameters must be 2-dimensional");
  }
  if (x.minCoeff() < 0.0) throw Error(failure, "invariant x in G violated");
  for (int i = 0; i < 2; ++i) {
    if (std::abs(r(i, i) - 1.0) > 1e-12) throw Error(failure, "invariant <d_i, e_i> = 1 violated");
  }
  const QMatrix q = q_matrix(sp());
  if (!(q.spectral_radius < 1.0)) {
    throw Error(failure, "invariant rho(Q) < 1 violated (rho = " + std::to_string(q.spectral_radius) + ")");
  }
}

SPData RbmParams::sp() const {
  return SPData(Mat::Identity(2, 2), Vec::Zero(2), r, PiFamily::orthant);
}

void Perturbation::validate(const RbmParams& params) const {
  if (y.size() != 2 || c.size() != 2 || theta.rows() != 2 || theta.cols() != 2 || v.rows() != 2 ||
      v.cols() != 2) {
    throw Error(ErrorKind::argument, "perturbation must be 2-dimensional");
  }
  if (v(0, 0) != 0.0 || v(1, 1) != 0.0) throw Error(ErrorKind::argument, "invariant diag(V) = 0 violated");
  for (int i = 0; i < 2; ++i) {
    if (params.x(i) == 0.0 && y(i) < 0.0) {
      throw Error(ErrorKind::argument, "invariant x + eps y in G violated for small eps");
    }
  }
}

RbmParams Perturbation::apply(const RbmParams& params, double eps) const {
  RbmParams p = params;
  p.x = params.x + eps * y;
  p.b = params.b + eps * c;
  p.sigma = params.sigma + eps * theta;
  p.r = params.r + eps * v;
  return p;
}

Perturbation operator+(const Perturbation& a, const Perturbation& b) {
  return {a.y + b.y, a.c + b.c, a.theta + b.theta, a.v + b.v};
}

Perturbation operator*(double s, const Perturbation& p) {
  return {s * p.y, s * p.c, s * p.theta, s * p.v};
}

// ---------------------------------------------------------------- noise

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double keyed_normal(std::uint64_t seed, std::uint64_t step, std::uint32_t component) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ step) ^ component);
  const double u = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

// ---------------------------------------------------------------- simulation

namespace {

SamplePath simulate_with(const RbmParams& params, const std::vector<double>& grid, std::uint64_t seed) {
  if (grid.empty() || grid.front() != 0.0) throw Error(ErrorKind::argument, "RBM grid must start at 0");
  SamplePath path;
  path.seed = seed;
  path.params = params;
  path.grid = grid;
  path.w.resize(grid.size());
  std::vector<Vec> xs(grid.size());
  path.w[0] = Vec::Zero(2);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double h = grid[k] - grid[k - 1];
    if (!(h > 0.0)) throw Error(ErrorKind::argument, "RBM grid must be strictly increasing");
    Vec xi(2);
    for (std::uint32_t c = 0; c < 2; ++c) xi(c) = keyed_normal(seed, k, c);
    path.w[k] = path.w[k - 1] + std::sqrt(h) * xi;
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    xs[k] = params.x + params.b * grid[k] + params.sigma * path.w[k];
  }
  path.x = PwLinearPath(grid, std::move(xs));
  path.esp = solve_esm(params.sp(), path.x, grid);
  return path;
}

}  // namespace

SamplePath simulate_rbm(const RbmParams& params, const std::vector<double>& grid, std::uint64_t seed) {
  params.validate();
  return simulate_with(params, grid, seed);
}

PwLinearPath perturbation_psi(const SamplePath& path, const Perturbation& pert) {
  if (!path.esp.l) throw Error(ErrorKind::decomposition, "sample path has no local-time decomposition");
  const PwLinearPath& l = *path.esp.l;
  std::vector<Vec> v(path.grid.size());
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    v[k] = pert.y + pert.c * path.grid[k] + pert.theta * path.w[k] + pert.v * l.value(k);
  }
  return PwLinearPath(path.grid, std::move(v));
}

PathwiseDerivative pathwise_derivative(const SamplePath& path, const Perturbation& pert) {
  pert.validate(path.params);
  const SPData sp = path.params.sp();
  PathwiseDerivative out;
  out.psi = perturbation_psi(path, pert);
  const ConstrainedPath z = path.esp.constrained();
  out.dp = solve_dp(sp, z, out.psi);
  out.dp.ensure_complete();
  out.theta = theta_z(sp, out.dp, z, nabla_pi(sp, path.params.x, pert.y));
  return out;
}

std::vector<Vec> fd_derivative(const SamplePath& path, const Perturbation& pert, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::argument, "eps must be positive");
  pert.validate(path.params);
  const RbmParams perturbed = pert.apply(path.params, eps);
  try {
    perturbed.validate(ErrorKind::epsilon_too_large);
  } catch (const Error& e) {
    throw Error(ErrorKind::epsilon_too_large, std::string("eps too large: ") + e.what());
  }
  const SamplePath other = simulate_with(perturbed, path.grid, path.seed);
  std::vector<Vec> out(path.grid.size());
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    out[k] = (other.esp.z.value(k) - path.esp.z.value(k)) / eps;
  }
  return out;
}

FdComparison compare_fd(const SamplePath& path, const PathwiseDerivative& deriv,
                        const std::vector<double>& eps, const std::vector<std::vector<Vec>>& fd,
                        int window) {
  if (fd.size() != eps.size()) throw Error(ErrorKind::argument, "one FD series per eps expected");
  const std::size_t m = path.grid.size();
  std::vector<bool> excluded(m, false);
  for (const DpEvent& e : deriv.dp.events) {
    const auto it = std::lower_bound(path.grid.begin(), path.grid.end(), e.time);
    const auto k = static_cast<long>(it - path.grid.begin());
    for (long j = k - window; j <= k + window; ++j) {
      if (j >= 0 && j < static_cast<long>(m)) excluded[static_cast<std::size_t>(j)] = true;
    }
  }
  FdComparison out;
  out.eps = eps;
  for (std::size_t k = 0; k < m; ++k) {
    if (!excluded[k]) ++out.compared;
  }
  for (const auto& series : fd) {
    double err = 0.0;
    for (std::size_t k = 0; k < m && k < deriv.theta.size(); ++k) {
      if (!excluded[k]) err = std::max(err, (series[k] - deriv.theta.value(k)).cwiseAbs().maxCoeff());
    }
    out.error.push_back(err);
  }
  out.strictly_decreasing = true;
  for (std::size_t i = 1; i < out.error.size(); ++i) {
    if (!(out.error[i] < out.error[i - 1])) out.strictly_decreasing = false;
  }
  return out;
}

FdComparison compare_fd(const SamplePath& path, const Perturbation& pert,
                        const PathwiseDerivative& deriv, const std::vector<double>& eps, int window) {
  std::vector<std::vector<Vec>> fd;
  for (double e : eps) fd.push_back(fd_derivative(path, pert, e));
  return compare_fd(path, deriv, eps, fd, window);
}

// ---------------------------------------------------------------- diagnostics

JitterReport jitter_diagnostics(const SamplePath& path, int window_count) {
  JitterReport rep;
  const auto& faces = path.esp.face_trace;
  const auto& grid = path.esp.grid;
  const std::size_t m = grid.size();
  rep.grid_points = m;
  const double horizon = grid.back();
  auto y_const = [&](std::size_t k) {
    const Vec& a = path.esp.y.value(k);
    const Vec& b = path.esp.y.value(k - 1);
    return (a - b).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.cwiseAbs().maxCoeff());
  };
  std::size_t constant = 0;
  double corner_time = 0.0;
  std::size_t before_ok = 0;
  std::size_t after_ok = 0;
  const int base = 1 << std::max(window_count, 0);
  for (std::size_t k = 0; k < m; ++k) {
    if (faces[k].empty()) continue;
    ++rep.boundary_touches;
    const bool left_const = k == 0 || y_const(k);
    const bool right_const = k + 1 >= m || y_const(k + 1);
    if (left_const && right_const) ++constant;
    if (faces[k].size() < 2) continue;
    if (k > 0) corner_time += grid[k] - grid[k - 1];
    ++rep.corner_hits;
    bool before = true;
    bool after = true;
    for (int j = 0; j < window_count; ++j) {
      const std::size_t w = static_cast<std::size_t>(std::max(1, base >> j));
      for (int i : faces[k]) {
        const FaceSet alone{i};
        bool seen_before = false;
        for (std::size_t s = k >= w ? k - w : 0; s < k; ++s) seen_before = seen_before || faces[s] == alone;
        bool seen_after = false;
        for (std::size_t s = k + 1; s <= std::min(m - 1, k + w); ++s) seen_after = seen_after || faces[s] == alone;
        before = before && seen_before;
        after = after && seen_after;
      }
    }
    if (before) ++before_ok;
    if (after) ++after_ok;
  }
  if (rep.boundary_touches > 0) {
    rep.constant_y_fraction = static_cast<double>(constant) / static_cast<double>(rep.boundary_touches);
  }
  rep.corner_time_fraction = horizon > 0.0 ? corner_time / horizon : 0.0;
  if (rep.corner_hits > 0) {
    rep.single_face_before_fraction = static_cast<double>(before_ok) / static_cast<double>(rep.corner_hits);
    rep.single_face_after_fraction = static_cast<double>(after_ok) / static_cast<double>(rep.corner_hits);
  }
  return rep;
}

std::vector<RbmPathResult> run_rbm_batch(const RbmParams& params, const Perturbation& pert,
                                         const std::vector<double>& grid,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::vector<double>& eps, int window_count,
                                         unsigned threads) {
  params.validate();
  pert.validate(params);
  std::vector<RbmPathResult> results(seeds.size());
  auto work = [&](std::size_t i) {
    RbmPathResult& r = results[i];
    r.seed = seeds[i];
    r.path = simulate_rbm(params, grid, seeds[i]);
    r.deriv = pathwise_derivative(r.path, pert);
    for (double e : eps) r.fd.push_back(fd_derivative(r.path, pert, e));
    r.comparison = compare_fd(r.path, r.deriv, eps, r.fd);
    r.jitter = jitter_diagnostics(r.path, window_count);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(seeds.size(), 1)));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < seeds.size(); i += threads) work(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace skorokhod
