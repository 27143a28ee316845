#include <iostream>

#include <CLI11.hpp>

#include "skorokhod/cli.hpp"

int main(int argc, char** argv) {
  skorokhod::RunConfig cfg;
  CLI::App app{"Skorokhod maps, derivative problems and RBM pathwise derivatives"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "output directory (default $SKOROKHOD_OUT_DIR or .)");
    sub->add_option("--tol-face", cfg.tol.face);
    sub->add_option("--tol-esm", cfg.tol.esm);
    sub->add_option("--tol-dp", cfg.tol.dp);
    sub->add_option("--tol-decomposition", cfg.tol.decomposition);
    sub->add_option("--tol-projection", cfg.tol.projection);
    sub->add_option("--tol-closed-form", cfg.tol.closed_form);
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--grid-dt,--dt", cfg.grid_dt, "uniform grid step");
    sub->add_option("--horizon", cfg.horizon, "time horizon T");
  };

  auto* esm = app.add_subcommand("esm", "solve the extended Skorokhod map for a path");
  esm->add_option("--sp", cfg.sp_path)->required();
  esm->add_option("--path", cfg.path_csv, "input path CSV")->required();
  esm->add_option("--path2", cfg.path2_csv, "second input for Lipschitz ratios");
  grid(esm);
  common(esm);

  auto* dp = app.add_subcommand("dp", "solve the derivative problem along a constrained path");
  dp->add_option("--sp", cfg.sp_path)->required();
  dp->add_option("--z", cfg.z_csv, "constrained path CSV")->required();
  dp->add_option("--trace", cfg.trace_csv, "face trace CSV")->required();
  dp->add_option("--psi", cfg.psi_csv, "perturbation path CSV")->required();
  common(dp);

  auto* fd = app.add_subcommand("deriv-fd", "compare DP derivative with finite differences");
  fd->add_option("--sp", cfg.sp_path)->required();
  fd->add_option("--path", cfg.path_csv)->required();
  fd->add_option("--psi", cfg.psi_csv)->required();
  fd->add_option("--eps", cfg.eps)->delimiter(',')->required();
  grid(fd);
  common(fd);

  auto* rbm = app.add_subcommand("rbm", "reflected Brownian motion pathwise derivatives");
  rbm->add_option("--params", cfg.params_path)->required();
  rbm->add_option("--pert", cfg.pert_path);
  rbm->add_option("--seed", cfg.seed);
  rbm->add_option("--paths", cfg.num_seeds, "number of consecutive seeds");
  rbm->add_option("--eps", cfg.eps)->delimiter(',');
  rbm->add_option("--windows", cfg.window_count, "jitter window count");
  rbm->add_option("--threads", cfg.threads);
  grid(rbm);
  common(rbm);

  auto* ce = app.add_subcommand("counterexample", "W-point subsequence tables");
  ce->add_option("--kmax", cfg.k_max);
  common(ce);

  auto* check = app.add_subcommand("check", "boundary classification, Q matrix, B verification");
  check->add_option("--sp", cfg.sp_path)->required();
  check->add_option("--b", cfg.b_path, "B JSON with vertices and delta");
  common(check);

  auto* proj = app.add_subcommand("proj", "derivative projection matrices and cyclic iterates");
  proj->add_option("--sp", cfg.sp_path)->required();
  proj->add_option("--faces", cfg.faces, "1-based face set, e.g. 1,2");
  proj->add_option("--y", cfg.y)->delimiter(',');
  proj->add_option("--sequence", cfg.sequence, "cyclic face sets, e.g. '1;2'");
  common(proj);

  CLI11_PARSE(app, argc, argv);
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return skorokhod::run(cfg, std::cout, std::cerr);
}
