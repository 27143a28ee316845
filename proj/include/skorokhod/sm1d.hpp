#pragma once

#include <utility>
#include <vector>

#include "skorokhod/paths.hpp"

namespace skorokhod {

/// Argmax set of -f over [0, t]: closed intervals, points stored as [a, a].
struct ArgmaxSet {
  double level = 0.0;
  std::vector<std::pair<double, double>> intervals;

  bool single_point() const noexcept {
    return intervals.size() == 1 && intervals.front().first == intervals.front().second;
  }
};

struct Gamma1Result {
  PwLinearPath z;
  PwLinearPath y;
};

/// Exact 1-D Skorokhod map on {z >= 0}: Y(t) = sup_{s<=t}(-f(s)) v 0, Z = f + Y.
/// Breakpoints are added where the running maximum attaches or detaches.
Gamma1Result gamma1(const PwLinearPath& f);

ArgmaxSet phi_set(const PwLinearPath& f, double t);

/// F(f, g)(t): 0 if sup(-f) < 0 on [0,t]; sup_{Phi}(-g) v 0 if the sup is 0;
/// sup_{Phi}(-g) otherwise.
double f_functional(const PwLinearPath& f, const PwLinearPath& g, double t);

struct OneSidedValues {
  double left = 0.0;
  double value = 0.0;
  double right = 0.0;
};

/// F(t-), F(t), F(t+). One-sided limits use the fact that F is affine in the
/// offset on a small enough one-sided neighbourhood of t.
OneSidedValues f_functional_limits(const PwLinearPath& f, const PwLinearPath& g, double t);

/// Directional derivative g(t) + F(f, g)(t) of the 1-D map.
double nabla_gamma1(const PwLinearPath& f, const PwLinearPath& g, double t);

/// (gamma1(f + eps g)(t) - gamma1(f)(t)) / eps.
double fd_oracle(const PwLinearPath& f, const PwLinearPath& g, double t, double eps);

}  // namespace skorokhod
