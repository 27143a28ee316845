#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace skorokhod {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Numerical rank with relative singular-value cutoff `rel_tol`.
int numerical_rank(const Mat& a, double rel_tol = 1e-10);

/// Orthonormal basis (as columns) of range(a).
Mat range_basis(const Mat& a, double rel_tol = 1e-10);

/// Orthonormal basis of {y : <y, a_j> = 0 for every column a_j}.
Mat orthogonal_complement(const Mat& a, int dim, double rel_tol = 1e-10);

struct LeastSquares {
  Vec coef;
  double residual = 0.0;
};

/// Minimum-norm least-squares solution of a * coef = b.
LeastSquares least_squares(const Mat& a, const Vec& b);

/// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
/// Returns false if fn asked to stop by returning false.
bool for_each_combination(int n, int k, const std::function<bool(const std::vector<int>&)>& fn);

double binomial(int n, int k);

struct SmallLpResult {
  bool feasible = false;
  double value = 0.0;
  Vec x;
};

/// Maximizes c'x over {aeq x = beq, aineq x <= bineq} by enumerating basic
/// solutions. Intended for a handful of variables; the feasible region must be
/// pointed and the objective bounded above. Throws size_limit when more than
/// `budget` bases would be visited.
SmallLpResult maximize_by_vertices(const Vec& c, const Mat& aeq, const Vec& beq, const Mat& aineq,
                                   const Vec& bineq, double tol = 1e-9, double budget = 2e6);

}  // namespace skorokhod
