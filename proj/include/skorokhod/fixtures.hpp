#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skorokhod/geometry.hpp"
#include "skorokhod/paths.hpp"

namespace skorokhod {

struct ExpectedValue {
  std::string label;
  double time = 0.0;
  Vec value;
  std::string source;  // "printed" (closed form as published) or "derived"
};

struct Fixture {
  std::string name;
  SPData sp;
  std::optional<BPolytope> b;
  double delta = 0.0;
  std::optional<PwLinearPath> x;
  std::optional<PwLinearPath> psi;
  std::vector<ExpectedValue> expected;
};

// ------------------------------------------------------------ W-point example

/// Quadrant SP with d_1 = d_2 = (1,1)' and its closed-form pi.
SPData d2_sp();
/// gamma = 1/2, t_n = 1 - gamma^n for n = 0..n_max, then 1.
std::vector<double> d2_times(int n_max);
/// The piecewise-linear input X (+ eps * (1,0)') with breakpoints d2_times.
PwLinearPath d2_input(int n_max, double eps = 0.0);

/// Closed forms as printed for Z(t_n), Z_{eps_k}(t_n) and Z_{eps'_k}(t_n).
Vec d2_printed_unperturbed(int n);
Vec d2_printed_even(int k, int n);
Vec d2_printed_odd(int k, int n);

/// Fixture with X, psi, B and the printed tables up to n_max breakpoints.
Fixture build_d2_counterexample(int n_max = 48);

struct D2Mismatch {
  std::string sequence;  // "unperturbed", "even", "odd"
  int k = 0;
  int n = 0;
  Vec solver;
  Vec printed;
};

struct D2Subsequences {
  std::vector<int> k;
  std::vector<Vec> even;  // (Z_{eps_k}(1) - Z(1)) / eps_k
  std::vector<Vec> odd;   // (Z_{eps'_k}(1) - Z(1)) / eps'_k
  Vec limit_even;
  Vec limit_odd;
  /// Largest |solver - printed| over all tabulated breakpoints and t = 1.
  double closed_form_deviation = 0.0;
  std::vector<D2Mismatch> mismatches;  // entries with deviation above 1e-12
};

/// Runs the generic ESM solver on the exact breakpoint grid for k = 1..k_max.
/// Refuses k_max > 20 (dyadic exactness).
D2Subsequences run_d2_subsequences(int k_max);

// ------------------------------------------------------------ other examples

/// 3-D ESP with four faces whose direction cone contains a line at 0.
Fixture build_d1_esp();

/// Quadrant generalized Harrison-Reiman data with d_1 = (1,-1)', d_2 = (1/2,1)'
/// and a parallelogram B adapted to those directions.
Fixture build_ghr_oblique();

/// Quadrant with normal reflection and the square B.
Fixture build_quadrant_normal();

}  // namespace skorokhod
