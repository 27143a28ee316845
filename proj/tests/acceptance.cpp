// Acceptance harness. One line per criterion:
//   [PASS] criterion N (name): details
// Run with --criterion N for a single criterion; exit status is nonzero iff a
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skorokhod/derivproj.hpp"
#include "skorokhod/dp.hpp"
#include "skorokhod/errors.hpp"
#include "skorokhod/esm.hpp"
#include "skorokhod/fixtures.hpp"
#include "skorokhod/rbm.hpp"
#include "skorokhod/sm1d.hpp"

using namespace skorokhod;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SPData one_dim_sp() {
  return SPData(Mat::Ones(1, 1), Vec::Zero(1), Mat::Ones(1, 1), PiFamily::one_dim);
}

PwLinearPath random_scalar_path(std::mt19937_64& rng, int pieces, double horizon, double amp) {
  std::uniform_real_distribution<double> ut(0.0, horizon);
  std::uniform_real_distribution<double> uv(-amp, amp);
  std::vector<double> t{0.0};
  for (int i = 0; i < pieces - 1; ++i) t.push_back(ut(rng));
  t.push_back(horizon);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<double> v;
  for (std::size_t i = 0; i < t.size(); ++i) v.push_back(uv(rng));
  return PwLinearPath::scalar(t, v);
}

PwLinearPath random_path(std::mt19937_64& rng, int dim, const std::vector<double>& t, double amp) {
  std::normal_distribution<double> n(0.0, amp);
  std::vector<Vec> v;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Vec x(dim);
    for (int j = 0; j < dim; ++j) x(j) = n(rng);
    v.push_back(x);
  }
  return PwLinearPath(t, v);
}

// ---------------------------------------------------------------- 1

// Independent recursion for the W-point example: Z_k = pi(Z_{k-1} + dX) with
// pi(x) = x + max(-x1, -x2, 0)(1, 1)', written out directly.
Vec d2_reference_at_one(int n_max, double eps) {
  const PwLinearPath x = d2_input(n_max, eps);
  Vec z = x.value(0);
  const double p0 = std::max({-z(0), -z(1), 0.0});
  z.array() += p0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    z += x.value(k) - x.value(k - 1);
    const double p = std::max({-z(0), -z(1), 0.0});
    z.array() += p;
  }
  return z;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const D2Subsequences d = run_d2_subsequences(20);
  const double elapsed = seconds_since(t0);
  const Vec e1 = (Vec(2) << 1.0, 0.0).finished();
  const Vec e2 = (Vec(2) << 0.0, 1.0).finished();
  int even_ok = 0;
  int odd_ok = 0;
  for (std::size_t i = 0; i < d.k.size(); ++i) {
    if (d.even[i] == e2) ++even_ok;
    if (d.odd[i] == e1) ++odd_ok;
  }
  double recursion_gap = 0.0;
  const Vec z1 = d2_reference_at_one(2 * 20 + 6, 0.0);
  for (int k = 1; k <= 20; ++k) {
    for (int parity = 0; parity < 2; ++parity) {
      const double eps = std::ldexp(1.0, -(2 * k + parity));
      const Vec ref = (d2_reference_at_one(2 * 20 + 6, eps) - z1) / eps;
      const Vec& got = parity == 0 ? d.even[k - 1] : d.odd[k - 1];
      recursion_gap = std::max(recursion_gap, (ref - got).cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream os;
  os << "even==(0,1)' at " << even_ok << "/20 k (limit (" << d.limit_even(0) << "," << d.limit_even(1)
     << ")'), odd==(1,0)' at " << odd_ok << "/20 k; solver vs printed closed forms max dev "
     << fmt(d.closed_form_deviation) << " (" << d.mismatches.size()
     << " entries > 1e-12); solver vs independent pi recursion " << fmt(recursion_gap) << "; "
     << fmt(elapsed) << " s";
  const bool pass = even_ok == 20 && odd_ok == 20 && d.closed_form_deviation <= 1e-12 && elapsed < 1.0;
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 2

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> uq(0.0, 1.0);
  int compared = 0;
  double worst_fd = 0.0;
  double worst_compl = 0.0;
  double worst_lip = 0.0;
  for (int pair = 0; pair < 200; ++pair) {
    const PwLinearPath f = random_scalar_path(rng, 12, 1.0, 1.0);
    const PwLinearPath g = random_scalar_path(rng, 12, 1.0, 1.0);
    for (int q = 0; q < 20; ++q) {
      const double t = uq(rng);
      if (!phi_set(f, t).single_point()) continue;
      ++compared;
      worst_fd = std::max(worst_fd, std::abs(nabla_gamma1(f, g, t) - fd_oracle(f, g, t, 1e-5)));
    }
    // Y may only increase on pieces where Z sits at 0.
    const Gamma1Result r = gamma1(f);
    for (std::size_t k = 1; k < r.y.size(); ++k) {
      if (r.y.value(k)(0) > r.y.value(k - 1)(0)) {
        worst_compl = std::max({worst_compl, std::abs(r.z.value(k - 1)(0)), std::abs(r.z.value(k)(0))});
      }
      worst_compl = std::max(worst_compl, r.y.value(k - 1)(0) - r.y.value(k)(0));
    }
    const PwLinearPath f2 = random_scalar_path(rng, 12, 1.0, 1.0);
    const Gamma1Result r2 = gamma1(f2);
    const double num = sup_norm(r.z - r2.z, 1.0);
    const double den = sup_norm(f - f2, 1.0);
    worst_lip = std::max(worst_lip, num / den);
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << compared << " single-point queries, max |nabla - fd| " << fmt(worst_fd) << "; complementarity residual "
     << fmt(worst_compl) << "; max Lipschitz ratio " << fmt(worst_lip) << "; " << fmt(elapsed) << " s";
  const bool pass = compared > 0 && worst_fd <= 1e-3 && worst_compl == 0.0 && worst_lip <= 2.0 + 1e-12 &&
                    elapsed < 5.0;
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 3

struct ProjStats {
  double algebra = 0.0;
  bool adjoint_exact = true;
  double worst_b_ratio = 0.0;
  double min_dual_margin = 1e300;
  bool setb_ok = true;
  int face_sets = 0;
};

void projection_checks(const Fixture& fx, std::mt19937_64& rng, ProjStats& s) {
  s.setb_ok = s.setb_ok && check_setB(fx.sp, *fx.b, fx.delta).ok;
  const BoundaryClassification bc = classify_boundary(fx.sp);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const FaceSetClass& c : bc.feasible) {
    if (c.in_w) continue;
    ++s.face_sets;
    const DerivProjection p = build_projection(fx.sp, c.faces);
    const ProjectionResiduals r = projection_residuals(fx.sp, p);
    s.algebra = std::max({s.algebra, r.idempotence, r.range, r.complement, r.adjoint_range, r.adjoint_complement});
    const Mat pt = adjoint(p);
    s.adjoint_exact = s.adjoint_exact && pt == p.p.transpose();
    // span d(x)^perp: y with <y, d_i> = 0 for the active i; random y avoid it a.s.
    const Mat d = fx.sp.directions_of(c.faces);
    for (int i = 0; i < 10000; ++i) {
      Vec y(fx.sp.dim());
      for (int j = 0; j < y.size(); ++j) y(j) = n(rng);
      const double by = fx.b->norm(y);
      s.worst_b_ratio = std::max(s.worst_b_ratio, fx.b->norm(p.apply(y)) / by);
      const double off = (d.transpose() * y).cwiseAbs().maxCoeff() / y.norm();
      if (off < 1e-6) continue;
      const double dy = fx.b->dual_norm(y);
      s.min_dual_margin = std::min(s.min_dual_margin, (dy - fx.b->dual_norm(pt * y)) / dy);
    }
  }
}

Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3);
  ProjStats s;
  projection_checks(build_ghr_oblique(), rng, s);
  projection_checks(build_quadrant_normal(), rng, s);
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << s.face_sets << " non-W face sets; algebra residual " << fmt(s.algebra) << "; adjoint "
     << (s.adjoint_exact ? "exact" : "inexact") << "; B check " << (s.setb_ok ? "passes" : "fails")
     << "; max |Py|_B/|y|_B " << fmt(s.worst_b_ratio) << "; min relative dual-norm decrease "
     << fmt(s.min_dual_margin) << "; " << fmt(elapsed) << " s";
  const bool pass = s.algebra <= 1e-10 && s.adjoint_exact && s.setb_ok && s.worst_b_ratio <= 1.0 + 1e-12 &&
                    s.min_dual_margin > 0.0 && elapsed < 5.0;
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 4

Outcome criterion4() {
  const Fixture fx = build_ghr_oblique();
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  const std::vector<FaceSet> seq{FaceSet{0}, FaceSet{1}};
  const FaceSet corner{0, 1};
  int worst_cycles = 0;
  double worst_gap = 0.0;
  double worst_factor = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    Vec y(2);
    y << n(rng), n(rng);
    try {
      const CompositionResult r = composition_limit(fx.sp, seq, corner, y, 200, 1e-12);
      worst_cycles = std::max(worst_cycles, r.cycles);
      worst_gap = std::max(worst_gap, (r.limit - r.target_value).cwiseAbs().maxCoeff());
      worst_factor = std::max(worst_factor, r.contraction_factor);
    } catch (const Error&) {
      ++failures;
    }
  }
  const double delta_hat = cycle_contraction(fx.sp, seq, corner, *fx.b);
  std::ostringstream os;
  os << "100 starts, " << failures << " failures; max cycles " << worst_cycles << "; max |limit - L_corner y| "
     << fmt(worst_gap) << "; max per-cycle contraction " << fmt(worst_factor) << "; dual-norm cycle delta "
     << fmt(delta_hat);
  const bool pass = failures == 0 && worst_cycles <= 200 && worst_gap <= 1e-10 && worst_factor < 1.0;
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 5

// Random pw-linear input driven into the corner of the oblique quadrant. Some
// seeds miss the corner; those are skipped.
std::optional<EspSolution> corner_hitting_run(const SPData& sp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t{0.0};
  for (int i = 1; i <= 40; ++i) t.push_back(i / 40.0);
  PwLinearPath x = random_path(rng, 2, t, 0.4);
  Vec drift(2);
  drift << -1.5 - u(rng), -1.5 - u(rng);
  std::vector<Vec> v;
  for (std::size_t k = 0; k < t.size(); ++k) v.push_back(x.value(k) + t[k] * drift);
  v[0] = (Vec(2) << 0.3 * u(rng), 0.3 * u(rng)).finished();
  x = PwLinearPath(t, v);
  EsmOptions opt;
  opt.decompose = false;
  EspSolution sol = solve_esm(sp, x, uniform_grid(1.0, 1.0 / 400), opt);
  for (const FaceSet& f : sol.face_trace) {
    if (f.size() == 2) return sol;
  }
  return std::nullopt;
}

Outcome criterion5() {
  const SPData sp = build_ghr_oblique().sp;
  std::mt19937_64 rng(5);
  int fixtures = 0;
  int attempts = 0;
  double lin = 0.0;
  double shift = 0.0;
  double jump = 0.0;
  double interior = 0.0;
  double constraint = 0.0;
  while (fixtures < 50 && attempts < 1000) {
    ++attempts;
    const auto sol = corner_hitting_run(sp, rng);
    if (!sol) continue;
    ++fixtures;
    const ConstrainedPath cz = sol->constrained();
    const PwLinearPath psi1 = random_path(rng, 2, sol->grid, 1.0);
    const PwLinearPath psi2 = random_path(rng, 2, sol->grid, 1.0);
    lin = std::max(lin, dp_linearity_check(sp, cz, psi1, psi2, 1.0, 1.0));
    lin = std::max(lin, dp_linearity_check(sp, cz, psi1, psi2, -0.7, 2.3));
    shift = std::max(shift, dp_timeshift_check(sp, cz, psi1, cz.grid().size() / 2));
    const DpSolution d = solve_dp(sp, cz, psi1);
    const DpResiduals r = dp_residuals(sp, d, cz, psi1);
    jump = std::max(jump, r.increment_span);
    interior = std::max(interior, r.interior_constancy);
    constraint = std::max(constraint, r.constraint);
  }

  // 1-D: phi(t_k) against g(t_k) + F(f, g)(t_k+).
  const SPData sp1 = one_dim_sp();
  std::mt19937_64 rng1(55);
  double one_dim = 0.0;
  int one_dim_points = 0;
  for (int i = 0; i < 50; ++i) {
    PwLinearPath f = random_scalar_path(rng1, 15, 1.0, 1.0);
    if (f.value(0)(0) == 0.0) continue;
    const PwLinearPath g = random_scalar_path(rng1, 15, 1.0, 1.0);
    const std::vector<double> grid = merge_times(f.times(), g.times());
    EsmOptions opt;
    opt.decompose = false;
    const EspSolution sol = solve_esm(sp1, f, grid, opt);
    const ConstrainedPath cz = sol.constrained();
    const DpSolution d = solve_dp(sp1, cz, refine(g, sol.grid));
    for (std::size_t k = 0; k + 1 < sol.grid.size(); ++k) {
      const double t = sol.grid[k];
      const double expect = g.at(t) + f_functional_limits(f, g, t).right;
      one_dim = std::max(one_dim, std::abs(d.phi.value(k)(0) - expect));
      ++one_dim_points;
    }
  }
  std::ostringstream os;
  os << fixtures << " corner-hitting fixtures (" << attempts << " draws); linearity " << fmt(lin)
     << ", time-shift " << fmt(shift) << ", jump inclusion " << fmt(jump) << ", interior constancy "
     << fmt(interior) << ", constraint " << fmt(constraint) << "; 1-D vs right-limit derivative " << fmt(one_dim)
     << " over " << one_dim_points << " grid times";
  const bool pass = fixtures == 50 && lin <= 1e-9 && shift <= 1e-9 && jump <= 1e-9 && interior <= 1e-9 &&
                    constraint <= 1e-9 && one_dim <= 1e-9;
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 6, 7

RbmParams oblique_params() {
  RbmParams p;
  p.x << 0.2, 0.3;
  p.b << -0.5, -0.3;
  p.sigma << 1.0, 0.2, 0.1, 0.8;
  p.r = build_ghr_oblique().sp.directions();
  return p;
}

Outcome fd_criterion(const Perturbation& pert, const std::string& label) {
  const auto t0 = std::chrono::steady_clock::now();
  const RbmParams params = oblique_params();
  const std::vector<double> grid = uniform_grid(1.0, std::ldexp(1.0, -14));
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 50; ++s) seeds.push_back(s);
  const std::vector<double> eps{1e-2, 1e-3, 1e-4};
  const auto results = run_rbm_batch(params, pert, grid, seeds, eps);
  const double elapsed = seconds_since(t0);
  int decreasing = 0;
  int rounding_only = 0;
  std::vector<double> e2, e3, e4;
  for (const RbmPathResult& r : results) {
    if (r.comparison.strictly_decreasing) ++decreasing;
    // Not decreasing, yet exact to rounding at every eps: Z^eps is affine in
    // eps on this path and the only error left grows like u / eps.
    const auto& e = r.comparison.error;
    if (!r.comparison.strictly_decreasing && *std::max_element(e.begin(), e.end()) <= 1e-10) ++rounding_only;
    e2.push_back(r.comparison.error[0]);
    e3.push_back(r.comparison.error[1]);
    e4.push_back(r.comparison.error[2]);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  std::ostringstream os;
  os << label << ": E(eps) strictly decreasing on " << decreasing << "/50 paths (need >= 45); median E = "
     << fmt(median(e2)) << ", " << fmt(median(e3)) << ", " << fmt(median(e4)) << " at eps = 1e-2, 1e-3, 1e-4; "
     << fmt(elapsed) << " s; " << rounding_only << " of the " << 50 - decreasing
     << " other paths have E <= 1e-10 at every eps";
  return {decreasing >= 45 && elapsed < 120.0, os.str()};
}

Outcome criterion6() {
  Perturbation p;
  p.y << 1.0, -0.5;
  p.c << 0.3, -0.2;
  p.theta << 0.2, 0.0, 0.1, -0.1;
  p.v << 0.0, 0.3, -0.2, 0.0;
  return fd_criterion(p, "mixed (y,c,theta,V)");
}

Outcome criterion7() {
  Perturbation p;
  p.v << 0.0, 0.3, -0.2, 0.0;
  return fd_criterion(p, "V only");
}

// ---------------------------------------------------------------- 8

Outcome criterion8() {
  RbmParams params;
  params.x << 0.0, 0.0;
  params.b << 0.0, 0.0;
  std::ostringstream os;
  std::vector<double> fractions;
  for (int e : {10, 12, 14}) {
    const std::vector<double> grid = uniform_grid(1.0, std::ldexp(1.0, -e));
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      sum += jitter_diagnostics(simulate_rbm(params, grid, seed)).corner_time_fraction;
    }
    fractions.push_back(sum / 50.0);
    os << (e == 10 ? "" : ", ") << "dt=2^-" << e << ": " << fmt(fractions.back());
  }
  const bool pass = fractions[1] < fractions[0] && fractions[2] < fractions[1];
  return {pass, "mean two-face time fraction " + os.str()};
}

// ---------------------------------------------------------------- 9

Outcome criterion9() {
  const SPData sp = one_dim_sp();
  // Non-dyadic kinks with bounded slopes, so the dyadic grids below resolve
  // every piece and the error is governed by the kink-to-grid distances.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> len(0.01, 0.03);
  std::uniform_real_distribution<double> rate(-4.0, 4.0);
  std::vector<double> ft{0.0};
  std::vector<double> fv{0.3};
  while (ft.back() < 1.0) {
    const double h = std::min(len(rng), 1.0 - ft.back());
    ft.push_back(ft.back() + h);
    fv.push_back(fv.back() + rate(rng) * h);
    if (1.0 - ft.back() < 1e-3) ft.back() = 1.0;
  }
  const PwLinearPath f = PwLinearPath::scalar(ft, fv);
  const Gamma1Result exact = gamma1(f);
  std::vector<double> logdt;
  std::vector<double> logerr;
  std::ostringstream os;
  double shift = 0.0;
  for (int e = 8; e <= 11; ++e) {
    const double dt = std::ldexp(1.0, -e);
    const std::vector<double> grid = uniform_grid(1.0, dt);
    std::vector<double> v;
    for (double t : grid) v.push_back(f.at(t));
    EsmOptions opt;
    opt.decompose = false;
    const EspSolution sol = solve_esm(sp, PwLinearPath::scalar(grid, v), grid, opt);
    double err = 0.0;
    for (double t : merge_times(grid, exact.z.times())) err = std::max(err, std::abs(sol.z.at(t) - exact.z.at(t)));
    logdt.push_back(std::log(dt));
    logerr.push_back(std::log(err));
    shift = std::max(shift, esm_timeshift_residual(sp, sol, grid.size() / 3));
    os << "dt=2^-" << e << " err " << fmt(err) << "; ";
  }
  const double n = static_cast<double>(logdt.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < logdt.size(); ++i) {
    sx += logdt[i];
    sy += logerr[i];
    sxx += logdt[i] * logdt[i];
    sxy += logdt[i] * logerr[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  os << "log-log slope " << fmt(slope) << "; time-shift residual " << fmt(shift);
  return {slope >= 0.9 && shift <= 1e-9, os.str()};
}

const char* kNames[] = {"",
                        "W-point counter-example",
                        "1-D oracle equivalence",
                        "projection algebra",
                        "composition limit",
                        "DP properties",
                        "RBM pathwise vs finite differences",
                        "reflection-direction derivative",
                        "jitter diagnostic trend",
                        "ESM scheme consistency"};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) selected.push_back(std::atoi(argv[++i]));
  }
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::function<Outcome()> runners[] = {nullptr,     criterion1, criterion2, criterion3, criterion4,
                                              criterion5, criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (int c : selected) {
    if (c < 1 || c > 9) {
      std::cerr << "unknown criterion " << c << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = runners[c]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << c << " (" << kNames[c] << "): " << o.detail
              << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
