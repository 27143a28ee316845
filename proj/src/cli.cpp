#include "skorokhod/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "skorokhod/derivproj.hpp"
#include "skorokhod/dp.hpp"
#include "skorokhod/errors.hpp"
#include "skorokhod/esm.hpp"
#include "skorokhod/fixtures.hpp"
#include "skorokhod/io.hpp"
#include "skorokhod/rbm.hpp"

namespace fs = std::filesystem;

namespace skorokhod {

namespace {

class Report {
 public:
  void check(const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    json_["residuals"][name] = {{"value", value}, {"tol", tol}, {"ok", ok}};
    if (!ok) ok_ = false;
  }
  Json& json() { return json_; }
  bool ok() const { return ok_; }

 private:
  Json json_ = Json::object();
  bool ok_ = true;
};

std::string out_dir(const RunConfig& c) { return c.out_dir.empty() ? default_out_dir() : c.out_dir; }

std::ofstream open_out(const RunConfig& c, const std::string& name) {
  const fs::path dir(out_dir(c));
  fs::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw Error(ErrorKind::io, "cannot write '" + (dir / name).string() + "'");
  return f;
}

void write_report(const RunConfig& c, Report& r) {
  auto f = open_out(c, "report.json");
  r.json()["ok"] = r.ok();
  f << r.json().dump(2) << '\n';
}

PwLinearPath read_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + file + "'");
  return read_pw_linear_csv(in);
}

std::vector<double> grid_for(const RunConfig& c, const PwLinearPath& x) {
  if (c.grid_dt > 0.0) {
    const double horizon = c.horizon > 0.0 ? c.horizon : x.horizon();
    return uniform_grid(horizon, c.grid_dt);
  }
  return x.times();
}

void write_path(const RunConfig& c, const std::string& name, const PwLinearPath& p, const char* prefix) {
  auto f = open_out(c, name);
  write_csv(f, p, prefix);
}

void write_step(const RunConfig& c, const std::string& name, const CadlagStepPath& p, const char* prefix) {
  auto f = open_out(c, name);
  write_csv(f, p, prefix);
}

Json event_log(const DpSolution& sol) {
  Json ev = Json::array();
  for (const DpEvent& e : sol.events) {
    ev.push_back({{"t", e.time}, {"faces", e.faces.to_string()}, {"projected", e.projected}});
  }
  return ev;
}

// ---------------------------------------------------------------- esm

int run_esm(const RunConfig& c, std::ostream& out) {
  const SPData sp = sp_from_json(read_json_file(c.sp_path));
  const PwLinearPath x = read_path(c.path_csv);
  const std::vector<double> grid = grid_for(c, x);
  EsmOptions opt;
  opt.face_tol = c.tol.face;
  opt.decompose = false;
  EspSolution sol = solve_esm(sp, x, grid, opt);
  Report rep;
  try {
    sol.l = decompose_local_times(sp, sol.z, sol.y, sol.face_trace, c.tol.decomposition);
    rep.json()["decomposition"] = "ok";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::decomposition) throw;
    rep.json()["decomposition"] = std::string("skipped: ") + e.what();
  }
  const EsmResiduals r = esm_residuals(sp, sol);
  rep.check("identity", r.identity, c.tol.esm);
  rep.check("domain", r.domain, c.tol.face);
  if (sol.l) {
    rep.check("y_equals_rl", r.ry, c.tol.esm);
    rep.check("complementarity", r.complementarity, c.tol.esm);
    rep.check("monotonicity", r.monotonicity, c.tol.esm);
  }
  rep.check("timeshift", esm_timeshift_residual(sp, sol, sol.grid.size() / 2), c.tol.esm);
  if (!c.path2_csv.empty()) {
    const PwLinearPath x2 = read_path(c.path2_csv);
    const double horizon = std::max(x.horizon(), x2.horizon());
    rep.json()["kappa_gamma"] = lipschitz_report(sp, x, x2, horizon, grid);
    if (sol.l) rep.json()["kappa_l"] = local_time_lipschitz_report(sp, x, x2, horizon, grid);
  }
  write_path(c, "z.csv", sol.z, "z");
  write_path(c, "y.csv", sol.y, "y");
  if (sol.l) write_path(c, "l.csv", *sol.l, "l");
  {
    auto f = open_out(c, "trace.csv");
    write_face_trace(f, sol.grid, sol.face_trace, sol.pushed);
  }
  rep.json()["grid_points"] = sol.grid.size();
  write_report(c, rep);
  out << rep.json().dump(2) << '\n';
  return rep.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- dp

int run_dp(const RunConfig& c, std::ostream& out) {
  const SPData sp = sp_from_json(read_json_file(c.sp_path));
  const PwLinearPath z = read_path(c.z_csv);
  std::ifstream tin(c.trace_csv);
  if (!tin) throw Error(ErrorKind::io, "cannot open '" + c.trace_csv + "'");
  std::vector<double> tgrid;
  std::vector<bool> pushed;
  std::vector<FaceSet> faces = read_face_trace(tin, &tgrid, &pushed);
  if (faces.size() != z.size()) throw Error(ErrorKind::argument, "face trace and Z have different grids");
  for (std::size_t k = 0; k < tgrid.size(); ++k) {
    if (std::abs(tgrid[k] - z.times()[k]) > 1e-12 * std::max(1.0, tgrid[k])) {
      throw Error(ErrorKind::argument, "face trace and Z have different grids");
    }
  }
  const ConstrainedPath cz{z, std::move(faces), std::move(pushed)};
  const PwLinearPath psi = read_path(c.psi_csv);
  const DpSolution sol = solve_dp(sp, cz, psi);
  const CadlagStepPath theta = theta_z(sp, sol, cz, nabla_pi(sp, z.value(0), psi.value(0)));
  Report rep;
  const DpResiduals r = dp_residuals(sp, sol, cz, psi);
  rep.check("phi_equals_psi_plus_eta", r.decomposition, c.tol.dp);
  rep.check("phi_in_h", r.constraint, c.tol.dp);
  rep.check("eta_increment_in_span_d", r.increment_span, c.tol.dp);
  rep.check("eta_constant_off_boundary", r.interior_constancy, c.tol.dp);
  if (sol.tau) rep.json()["tau"] = *sol.tau;
  rep.json()["events"] = event_log(sol);
  write_step(c, "phi.csv", sol.phi, "phi");
  write_step(c, "eta.csv", sol.eta, "eta");
  write_step(c, "theta.csv", theta, "theta");
  write_report(c, rep);
  out << "dp: " << sol.phi.size() << " grid points, " << sol.events.size() << " events\n";
  return rep.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- deriv-fd

int run_deriv_fd(const RunConfig& c, std::ostream& out) {
  const SPData sp = sp_from_json(read_json_file(c.sp_path));
  const PwLinearPath x = read_path(c.path_csv);
  const PwLinearPath psi = read_path(c.psi_csv);
  std::vector<double> grid = merge_times(grid_for(c, x), psi.times());
  EsmOptions opt;
  opt.face_tol = c.tol.face;
  opt.decompose = false;
  const EspSolution base = solve_esm(sp, x, grid, opt);
  const ConstrainedPath cz = base.constrained();
  const DpSolution sol = solve_dp(sp, cz, psi);
  const CadlagStepPath theta = theta_z(sp, sol, cz, nabla_pi(sp, project_pi(sp, x.value(0)), psi.value(0)));
  Report rep;
  const DpResiduals r = dp_residuals(sp, sol, cz, psi);
  rep.check("phi_in_h", r.constraint, c.tol.dp);
  rep.check("eta_increment_in_span_d", r.increment_span, c.tol.dp);
  if (sol.tau) rep.json()["tau"] = *sol.tau;
  const std::size_t m = sol.phi.size();
  std::vector<std::vector<Vec>> fds;
  Json diffs = Json::array();
  for (double e : c.eps) {
    const EspSolution pert = solve_esm(sp, linear_combination(1.0, x, e, psi), base.grid, opt);
    std::vector<Vec> fd(m);
    double worst = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      fd[k] = (pert.z.value(k) - base.z.value(k)) / e;
      worst = std::max(worst, (fd[k] - theta.value(k)).cwiseAbs().maxCoeff());
    }
    diffs.push_back({{"eps", e}, {"max_abs_diff", worst}});
    fds.push_back(std::move(fd));
  }
  rep.json()["fd_vs_dp"] = diffs;
  auto f = open_out(c, "deriv.csv");
  f << std::setprecision(17) << 't';
  const int j = sp.dim();
  for (int i = 1; i <= j; ++i) f << ",theta" << i;
  for (double e : c.eps) {
    for (int i = 1; i <= j; ++i) f << ",fd_" << e << '_' << i;
  }
  f << '\n';
  for (std::size_t k = 0; k < m; ++k) {
    f << sol.phi.times()[k];
    for (int i = 0; i < j; ++i) f << ',' << theta.value(k)(i);
    for (const auto& fd : fds) {
      for (int i = 0; i < j; ++i) f << ',' << fd[k](i);
    }
    f << '\n';
  }
  write_report(c, rep);
  out << rep.json().dump(2) << '\n';
  return rep.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- rbm

int run_rbm(const RunConfig& c, std::ostream& out) {
  const RbmParams params = rbm_params_from_json(read_json_file(c.params_path));
  const Perturbation pert = c.pert_path.empty() ? Perturbation{} : perturbation_from_json(read_json_file(c.pert_path));
  const std::vector<double> grid = uniform_grid(c.horizon > 0.0 ? c.horizon : 1.0, c.grid_dt);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < c.num_seeds; ++i) seeds.push_back(c.seed + static_cast<std::uint64_t>(i));
  const auto results = run_rbm_batch(params, pert, grid, seeds, c.eps, c.window_count, c.threads);
  Report rep;
  const SPData sp = params.sp();
  Json paths = Json::array();
  double worst_esm = 0.0;
  double worst_dp = 0.0;
  std::size_t decreasing = 0;
  for (const RbmPathResult& r : results) {
    const EsmResiduals er = esm_residuals(sp, r.path.esp);
    worst_esm = std::max({worst_esm, er.identity, er.ry, er.complementarity, er.monotonicity});
    const DpResiduals dr = dp_residuals(sp, r.deriv.dp, r.path.esp.constrained(), r.deriv.psi);
    worst_dp = std::max({worst_dp, dr.constraint, dr.increment_span, dr.interior_constancy});
    if (r.comparison.strictly_decreasing) ++decreasing;
    paths.push_back({{"seed", r.seed},
                     {"fd_error", r.comparison.error},
                     {"compared_points", r.comparison.compared},
                     {"strictly_decreasing", r.comparison.strictly_decreasing},
                     {"jitter",
                      {{"boundary_touches", r.jitter.boundary_touches},
                       {"constant_y_fraction", r.jitter.constant_y_fraction},
                       {"corner_time_fraction", r.jitter.corner_time_fraction},
                       {"corner_hits", r.jitter.corner_hits},
                       {"single_face_before_fraction", r.jitter.single_face_before_fraction},
                       {"single_face_after_fraction", r.jitter.single_face_after_fraction}}}});
    auto f = open_out(c, "path_" + std::to_string(r.seed) + ".csv");
    f << std::setprecision(17) << "t,z1,z2,dz1,dz2";
    for (double e : c.eps) f << ",fd_" << e << "_1,fd_" << e << "_2";
    f << '\n';
    for (std::size_t k = 0; k < r.path.grid.size(); ++k) {
      const Vec& z = r.path.esp.z.value(k);
      const Vec& d = r.deriv.theta.value(k);
      f << r.path.grid[k] << ',' << z(0) << ',' << z(1) << ',' << d(0) << ',' << d(1);
      for (const auto& fd : r.fd) f << ',' << fd[k](0) << ',' << fd[k](1);
      f << '\n';
    }
  }
  rep.check("esm_invariants", worst_esm, c.tol.esm);
  rep.check("dp_invariants", worst_dp, c.tol.dp);
  rep.json()["eps"] = c.eps;
  rep.json()["paths"] = paths;
  rep.json()["fraction_strictly_decreasing"] =
      results.empty() ? 0.0 : static_cast<double>(decreasing) / static_cast<double>(results.size());
  write_report(c, rep);
  out << "rbm: " << results.size() << " paths, strictly decreasing E(eps) on " << decreasing << '\n';
  return rep.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- counterexample

int run_counterexample(const RunConfig& c, std::ostream& out) {
  const D2Subsequences d = run_d2_subsequences(c.k_max);
  auto table = [&](const std::string& name, const std::vector<Vec>& vals, int parity) {
    std::ostringstream os;
    os << std::setprecision(17) << "k,eps,d1,d2\n";
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const int k = d.k[i];
      os << k << ',' << std::ldexp(1.0, -(2 * k + parity)) << ',' << vals[i](0) << ',' << vals[i](1) << '\n';
    }
    auto f = open_out(c, name);
    f << os.str();
    return os.str();
  };
  out << "# even subsequence eps_k = gamma^(2k)\n" << table("even.csv", d.even, 0);
  out << "# odd subsequence eps'_k = gamma^(2k+1)\n" << table("odd.csv", d.odd, 1);
  Report rep;
  rep.check("closed_form_deviation", d.closed_form_deviation, c.tol.closed_form);
  rep.json()["limit_even"] = vec_to_json(d.limit_even);
  rep.json()["limit_odd"] = vec_to_json(d.limit_odd);
  Json mm = Json::array();
  for (const D2Mismatch& m : d.mismatches) {
    mm.push_back({{"sequence", m.sequence}, {"k", m.k}, {"n", m.n}, {"solver", vec_to_json(m.solver)},
                  {"printed", vec_to_json(m.printed)}});
  }
  rep.json()["mismatches"] = mm;
  write_report(c, rep);
  return rep.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- check

int run_check(const RunConfig& c, std::ostream& out) {
  const SPData sp = sp_from_json(read_json_file(c.sp_path));
  Report rep;
  const BoundaryClassification bc = classify_boundary(sp);
  Json sets = Json::array();
  for (const FaceSetClass& f : bc.feasible) {
    Json entry = {{"faces", f.faces.to_string()}, {"smooth", f.smooth}, {"nonsmooth", f.nonsmooth},
                  {"in_V", f.in_v}, {"in_W", f.in_w}, {"witness", vec_to_json(f.witness)}};
    if (!f.in_w) {
      const DerivProjection p = build_projection(sp, f.faces);
      const ProjectionResiduals pr = projection_residuals(sp, p);
      const double worst = std::max({pr.idempotence, pr.range, pr.complement, pr.adjoint_range, pr.adjoint_complement});
      rep.check("projection_{" + f.faces.to_string() + "}", worst, c.tol.projection);
    }
    sets.push_back(entry);
  }
  rep.json()["face_sets"] = sets;
  rep.json()["V_empty"] = bc.v_empty();
  rep.json()["W_empty"] = bc.w_empty();
  if (sp.num_faces() == sp.dim()) {
    const QMatrix q = q_matrix(sp);
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < q.q.rows(); ++i) rows.push_back(vec_to_json(q.q.row(i).transpose()));
    rep.json()["Q"] = rows;
    rep.json()["spectral_radius"] = q.spectral_radius;
  }
  if (!c.b_path.empty()) {
    const Json bj = read_json_file(c.b_path);
    const BPolytope b = bpolytope_from_json(bj);
    const double delta = bj.value("delta", 0.0);
    const SetBCheck chk = check_setB(sp, b, delta);
    rep.json()["setB"] = {{"ok", chk.ok}, {"violations", chk.violations}, {"delta", delta}};
    rep.check("setB_violations", static_cast<double>(chk.violations.size()), 0.0);
  }
  write_report(c, rep);
  out << rep.json().dump(2) << '\n';
  return rep.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- proj

Json matrix_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i).transpose()));
  return rows;
}

int run_proj(const RunConfig& c, std::ostream& out) {
  const SPData sp = sp_from_json(read_json_file(c.sp_path));
  const FaceSet target = FaceSet::parse(c.faces);
  const DerivProjection p = build_projection(sp, target);
  Report rep;
  const ProjectionResiduals pr = projection_residuals(sp, p);
  rep.check("idempotence", pr.idempotence, c.tol.projection);
  rep.check("range", pr.range, c.tol.projection);
  rep.check("complement", pr.complement, c.tol.projection);
  rep.json()["faces"] = target.to_string();
  rep.json()["P"] = matrix_json(p.p);
  rep.json()["P_adjoint"] = matrix_json(adjoint(p));
  if (!c.y.empty()) {
    const Vec y = Eigen::Map<const Vec>(c.y.data(), static_cast<Eigen::Index>(c.y.size()));
    if (y.size() != sp.dim()) throw Error(ErrorKind::argument, "--y has the wrong dimension");
    rep.json()["Py"] = vec_to_json(p.apply(y));
    if (!c.sequence.empty()) {
      std::vector<FaceSet> seq;
      std::stringstream ss(c.sequence);
      std::string item;
      while (std::getline(ss, item, ';')) seq.push_back(FaceSet::parse(item));
      Json iterates = Json::array();
      Vec cur = y;
      for (int cycle = 0; cycle < 200; ++cycle) {
        for (const FaceSet& f : seq) cur = build_projection(sp, f).apply(cur);
        iterates.push_back(vec_to_json(cur));
        if ((cur - p.apply(y)).cwiseAbs().maxCoeff() < 1e-14) break;
      }
      const CompositionResult cr = composition_limit(sp, seq, target, y);
      rep.json()["iterates"] = iterates;
      rep.json()["cycles"] = cr.cycles;
      rep.json()["contraction_factor"] = cr.contraction_factor;
      rep.check("limit_vs_target", (cr.limit - cr.target_value).cwiseAbs().maxCoeff(), c.tol.projection);
    }
  }
  write_report(c, rep);
  out << rep.json().dump(2) << '\n';
  return rep.ok() ? 0 : 1;
}

}  // namespace

void RunConfig::validate() const {
  static const std::vector<std::string> known{"esm", "dp", "deriv-fd", "rbm", "counterexample", "check", "proj"};
  if (std::find(known.begin(), known.end(), subcommand) == known.end()) {
    throw Error(ErrorKind::argument, "unknown subcommand '" + subcommand + "'");
  }
  if (grid_dt < 0.0) throw Error(ErrorKind::argument, "grid step must be positive");
  if (horizon < 0.0) throw Error(ErrorKind::argument, "horizon must be positive");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw Error(ErrorKind::argument, "eps schedule must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw Error(ErrorKind::argument, "eps schedule must be strictly decreasing");
  }
  auto need = [&](const std::string& v, const char* flag) {
    if (v.empty()) throw Error(ErrorKind::argument, subcommand + " needs " + flag);
  };
  if (subcommand == "esm") {
    need(sp_path, "--sp");
    need(path_csv, "--path");
  } else if (subcommand == "dp") {
    need(sp_path, "--sp");
    need(z_csv, "--z");
    need(trace_csv, "--trace");
    need(psi_csv, "--psi");
  } else if (subcommand == "deriv-fd") {
    need(sp_path, "--sp");
    need(path_csv, "--path");
    need(psi_csv, "--psi");
    if (eps.empty()) throw Error(ErrorKind::argument, "deriv-fd needs --eps");
  } else if (subcommand == "rbm") {
    need(params_path, "--params");
    if (!(grid_dt > 0.0)) throw Error(ErrorKind::argument, "rbm needs --grid-dt > 0");
    if (num_seeds < 1) throw Error(ErrorKind::argument, "--paths must be at least 1");
  } else if (subcommand == "counterexample") {
    if (k_max < 1 || k_max > 20) throw Error(ErrorKind::argument, "--kmax must lie in 1..20");
  } else if (subcommand == "check") {
    need(sp_path, "--sp");
  } else if (subcommand == "proj") {
    need(sp_path, "--sp");
  }
}

std::string default_out_dir() {
  const char* env = std::getenv("SKOROKHOD_OUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto fail = [&](const std::string& kind, const std::string& message) {
    const Json e = {{"error", kind}, {"message", message}, {"subcommand", config.subcommand}};
    err << e.dump() << '\n';
    try {
      const fs::path dir(out_dir(config));
      fs::create_directories(dir);
      std::ofstream(dir / "error.json") << e.dump(2) << '\n';
    } catch (...) {
    }
    return 2;
  };
  try {
    config.validate();
    const std::string& s = config.subcommand;
    if (s == "esm") return run_esm(config, out);
    if (s == "dp") return run_dp(config, out);
    if (s == "deriv-fd") return run_deriv_fd(config, out);
    if (s == "rbm") return run_rbm(config, out);
    if (s == "counterexample") return run_counterexample(config, out);
    if (s == "check") return run_check(config, out);
    return run_proj(config, out);
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}

}  // namespace skorokhod
