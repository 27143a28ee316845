#include "skorokhod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skorokhod/errors.hpp"

namespace skorokhod {

namespace {

int rank_from_singular_values(const Vec& s, double rel_tol) {
  if (s.size() == 0) return 0;
  const double cutoff = rel_tol * std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++r;
  }
  return r;
}

}  // namespace

int numerical_rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  return rank_from_singular_values(svd.singularValues(), rel_tol);
}

Mat range_basis(const Mat& a, double rel_tol) {
  if (a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  const int r = rank_from_singular_values(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(r);
}

Mat orthogonal_complement(const Mat& a, int dim, double rel_tol) {
  if (a.cols() == 0) return Mat::Identity(dim, dim);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  const int r = rank_from_singular_values(svd.singularValues(), rel_tol);
  return svd.matrixU().rightCols(dim - r);
}

LeastSquares least_squares(const Mat& a, const Vec& b) {
  LeastSquares out;
  if (a.cols() == 0) {
    out.coef = Vec(0);
    out.residual = b.norm();
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
  out.coef = cod.solve(b);
  out.residual = (a * out.coef - b).norm();
  return out;
}

bool for_each_combination(int n, int k, const std::function<bool(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(idx)) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

SmallLpResult maximize_by_vertices(const Vec& c, const Mat& aeq, const Vec& beq, const Mat& aineq,
                                   const Vec& bineq, double tol, double budget) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(aineq.rows());
  const int req = aeq.rows() > 0 ? numerical_rank(aeq) : 0;
  const int k = n - req;
  SmallLpResult best;
  if (k < 0 || k > m) return best;
  if (binomial(m, k) > budget) {
    throw Error(ErrorKind::size_limit, "vertex enumeration budget exceeded");
  }
  best.value = -std::numeric_limits<double>::infinity();
  const Eigen::Index neq = aeq.rows();
  for_each_combination(m, k, [&](const std::vector<int>& rows) {
    Mat sys(neq + k, n);
    Vec rhs(neq + k);
    if (neq > 0) {
      sys.topRows(neq) = aeq;
      rhs.head(neq) = beq;
    }
    for (int j = 0; j < k; ++j) {
      sys.row(neq + j) = aineq.row(rows[static_cast<std::size_t>(j)]);
      rhs(neq + j) = bineq(rows[static_cast<std::size_t>(j)]);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(sys);
    qr.setThreshold(1e-12);
    if (qr.rank() < n) return true;
    const Vec x = qr.solve(rhs);
    const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
    if ((sys * x - rhs).cwiseAbs().maxCoeff() > tol * scale) return true;
    if (m > 0 && ((aineq * x - bineq).array() > tol * (1.0 + bineq.cwiseAbs().array())).any()) return true;
    const double v = c.dot(x);
    if (!best.feasible || v > best.value) {
      best.feasible = true;
      best.value = v;
      best.x = x;
    }
    return true;
  });
  return best;
}

}  // namespace skorokhod
