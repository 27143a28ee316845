#include "skorokhod/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "skorokhod/errors.hpp"
#include "skorokhod/esm.hpp"

namespace skorokhod {

namespace {

double gpow(int n) { return std::ldexp(1.0, -n); }

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// sum_{j=a}^{b} gamma^{2j+1}
double odd_sum(int a, int b) {
  double s = 0.0;
  for (int j = a; j <= b; ++j) s += gpow(2 * j + 1);
  return s;
}

Vec d2_pi(const Vec& x) {
  const double s = std::max({-x(0), -x(1), 0.0});
  return x + s * Vec::Ones(2);
}

}  // namespace

SPData d2_sp() {
  Mat d(2, 2);
  d << 1.0, 1.0, 1.0, 1.0;
  return SPData(Mat::Identity(2, 2), Vec::Zero(2), d, PiFamily::custom_pi, d2_pi);
}

std::vector<double> d2_times(int n_max) {
  if (n_max < 1 || n_max > 50) throw Error(ErrorKind::argument, "n_max must lie in 1..50");
  std::vector<double> t;
  for (int n = 0; n <= n_max; ++n) t.push_back(1.0 - gpow(n));
  t.push_back(1.0);
  return t;
}

PwLinearPath d2_input(int n_max, double eps) {
  const std::vector<double> t = d2_times(n_max);
  std::vector<Vec> v;
  v.push_back(v2(1.0 + eps, 0.0));
  for (int n = 0; n < n_max; ++n) {
    Vec next = v.back();
    next(n % 2) -= 3.0 * gpow(n + 1);
    v.push_back(next);
  }
  v.push_back(v2(-1.0 + eps, -1.0));
  return PwLinearPath(t, std::move(v));
}

Vec d2_printed_unperturbed(int n) {
  if (n == 0) return v2(1.0, 0.0);
  if (n % 2 == 1) return v2(0.0, gpow(n));
  return v2(gpow(n), 0.0);
}

Vec d2_printed_even(int k, int n) {
  const double e = gpow(2 * k);
  if (n == 0) return v2(1.0 + e, 0.0);
  if (n % 2 == 1) {
    const int m = (n - 1) / 2;
    if (m < k) return v2(0.0, gpow(2 * m + 1) - e);
    if (m == k) return v2(gpow(2 * k + 1), 0.0);
    return v2(0.0, gpow(2 * k + 1) + 3.0 * odd_sum(k + 1, m));
  }
  const int m = (n - 2) / 2;
  if (m < k) return v2(gpow(2 * m + 2) + e, 0.0);
  if (m == k) return v2(gpow(2 * k + 1) + 3.0 * gpow(2 * k + 2), 0.0);
  return v2(0.0, gpow(2 * k + 1) + 3.0 * odd_sum(k + 1, m) + 3.0 * gpow(2 * m + 2));
}

Vec d2_printed_odd(int k, int n) {
  const double e = gpow(2 * k + 1);
  if (n == 0) return v2(1.0 + e, 0.0);
  if (n % 2 == 1) {
    const int m = (n - 1) / 2;
    if (m < k) return v2(0.0, gpow(2 * m + 1) - e);
    if (m == k) return v2(0.0, 0.0);
    return v2(3.0 * odd_sum(k + 1, m) + 3.0 * gpow(2 * m + 2), 0.0);
  }
  const int m = (n - 2) / 2;
  if (m < k) return v2(gpow(2 * m + 2) + e, 0.0);
  if (m == k) return v2(3.0 * gpow(2 * k + 2), 0.0);
  return v2(3.0 * odd_sum(k + 1, m + 1), 0.0);
}

Fixture build_d2_counterexample(int n_max) {
  std::vector<Vec> bv{v2(2.0, 1.0), v2(1.0, 2.0), v2(-2.0, -1.0), v2(-1.0, -2.0)};
  Fixture f{"d2_w_point", d2_sp(), BPolytope(std::move(bv)), 1.0, d2_input(n_max),
            PwLinearPath::constant(v2(1.0, 0.0), 1.0), {}};
  const std::vector<double> t = d2_times(n_max);
  for (int n = 0; n <= n_max; ++n) {
    f.expected.push_back({"Z(t_" + std::to_string(n) + ")", t[static_cast<std::size_t>(n)],
                          d2_printed_unperturbed(n), "printed"});
  }
  f.expected.push_back({"Z(1)", 1.0, v2(0.0, 0.0), "printed"});
  for (int k = 1; k <= 20; ++k) {
    f.expected.push_back({"Z_eps_" + std::to_string(k) + "(1)", 1.0, v2(0.0, gpow(2 * k)), "printed"});
    f.expected.push_back({"Z_eps'_" + std::to_string(k) + "(1)", 1.0, v2(gpow(2 * k + 1), 0.0), "printed"});
  }
  return f;
}

D2Subsequences run_d2_subsequences(int k_max) {
  if (k_max < 1 || k_max > 20) throw Error(ErrorKind::argument, "k_max must lie in 1..20");
  const int n_max = 2 * k_max + 6;
  const SPData sp = d2_sp();
  const std::vector<double> grid = d2_times(n_max);
  EsmOptions opt;
  opt.decompose = false;
  D2Subsequences out;
  auto record = [&](const std::string& seq, int k, int n, const Vec& solver, const Vec& printed) {
    const double dev = (solver - printed).cwiseAbs().maxCoeff();
    out.closed_form_deviation = std::max(out.closed_form_deviation, dev);
    if (dev > 1e-12) out.mismatches.push_back({seq, k, n, solver, printed});
  };
  const EspSolution base = solve_esm(sp, d2_input(n_max), grid, opt);
  for (int n = 0; n <= n_max; ++n) record("unperturbed", 0, n, base.z.value(static_cast<std::size_t>(n)), d2_printed_unperturbed(n));
  const Vec z1 = base.z(1.0);
  record("unperturbed", 0, -1, z1, v2(0.0, 0.0));
  for (int k = 1; k <= k_max; ++k) {
    out.k.push_back(k);
    for (int parity = 0; parity < 2; ++parity) {
      const double eps = gpow(2 * k + parity);
      const EspSolution s = solve_esm(sp, d2_input(n_max, eps), grid, opt);
      const std::string seq = parity == 0 ? "even" : "odd";
      for (int n = 0; n <= n_max; ++n) {
        const Vec printed = parity == 0 ? d2_printed_even(k, n) : d2_printed_odd(k, n);
        record(seq, k, n, s.z.value(static_cast<std::size_t>(n)), printed);
      }
      const Vec ze = s.z(1.0);
      record(seq, k, -1, ze, parity == 0 ? v2(0.0, eps) : v2(eps, 0.0));
      const Vec d = (ze - z1) / eps;
      (parity == 0 ? out.even : out.odd).push_back(d);
    }
  }
  out.limit_even = out.even.back();
  out.limit_odd = out.odd.back();
  return out;
}

Fixture build_d1_esp() {
  const double r3 = std::sqrt(3.0);
  Mat n = Mat::Zero(3, 4);
  Mat d = Mat::Zero(3, 4);
  for (int i = 0; i < 3; ++i) {
    n(i, i) = 1.0;
    d(i, i) = 1.0;
  }
  n.col(3) << 1.0 / r3, 1.0 / r3, -1.0 / r3;
  d.col(3) << 0.0, 0.0, -r3;
  PiFunction pi = [](const Vec& x) {
    const double a1 = std::max(x(0), 0.0);
    const double a2 = std::max(x(1), 0.0);
    const double a3 = std::max(x(2), 0.0);
    Vec p(3);
    p << a1, a2, std::min(a1 + a2, a3);
    return p;
  };
  std::vector<Vec> bv;
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      for (int s3 : {-1, 1}) {
        Vec v(3);
        v << s1, s2, 4.0 * s3;
        bv.push_back(v);
      }
    }
  }
  return Fixture{"d1_v_point", SPData(n, Vec::Zero(4), d, PiFamily::custom_pi, pi), BPolytope(std::move(bv)),
                 1.0, std::nullopt, std::nullopt, {}};
}

Fixture build_ghr_oblique() {
  Mat d(2, 2);
  d << 1.0, 0.5, -1.0, 1.0;
  // B = {|z1 + z2| <= 1, |2 z1 - z2| <= 3/2}: its facet normals (1,1) and
  // (2,-1) are orthogonal to d_1 and d_2 respectively.
  std::vector<Vec> bv{v2(5.0 / 6.0, 1.0 / 6.0), v2(-1.0 / 6.0, 7.0 / 6.0), v2(-5.0 / 6.0, -1.0 / 6.0),
                      v2(1.0 / 6.0, -7.0 / 6.0)};
  return Fixture{"ghr_oblique", SPData(Mat::Identity(2, 2), Vec::Zero(2), d, PiFamily::orthant),
                 BPolytope(std::move(bv)), 0.1, std::nullopt, std::nullopt, {}};
}

Fixture build_quadrant_normal() {
  std::vector<Vec> bv{v2(1.0, 1.0), v2(-1.0, 1.0), v2(-1.0, -1.0), v2(1.0, -1.0)};
  return Fixture{"quadrant_normal",
                 SPData(Mat::Identity(2, 2), Vec::Zero(2), Mat::Identity(2, 2), PiFamily::orthant),
                 BPolytope(std::move(bv)), 0.5, std::nullopt, std::nullopt, {}};
}

}  // namespace skorokhod
