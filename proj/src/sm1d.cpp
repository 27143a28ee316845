#include "skorokhod/sm1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skorokhod/errors.hpp"

namespace skorokhod {

namespace {

void require_scalar(const PwLinearPath& f) {
  if (f.dim() != 1) throw Error(ErrorKind::argument, "1-D map needs a scalar path");
}

double max_abs(const PwLinearPath& f) {
  double m = 0.0;
  for (const Vec& v : f.values()) m = std::max(m, std::abs(v(0)));
  return m;
}

struct Point {
  double t;
  double v;
};

// (-f)^+ as a list of points, with zero crossings inserted.
std::vector<Point> positive_part_of_negation(const PwLinearPath& f) {
  std::vector<Point> out;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double t = f.times()[k];
    const double h = -f.value(k)(0);
    if (k > 0) {
      const Point prev{f.times()[k - 1], -f.value(k - 1)(0)};
      if ((prev.v < 0.0 && h > 0.0) || (prev.v > 0.0 && h < 0.0)) {
        const double tc = prev.t + (0.0 - prev.v) / (h - prev.v) * (t - prev.t);
        if (tc > prev.t && tc < t) out.push_back({tc, 0.0});
      }
    }
    out.push_back({t, std::max(h, 0.0)});
  }
  return out;
}

// -f sampled at breakpoints up to t, plus t itself.
std::vector<Point> negation_up_to(const PwLinearPath& f, double t) {
  std::vector<Point> pts;
  for (std::size_t k = 0; k < f.size() && f.times()[k] < t; ++k) {
    pts.push_back({f.times()[k], -f.value(k)(0)});
  }
  pts.push_back({t, -f.at(t)});
  return pts;
}

double sup_neg_g(const PwLinearPath& g, double a, double b) {
  double s = std::max(-g.at(a), -g.at(b));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double u = g.times()[k];
    if (u > a && u < b) s = std::max(s, -g.value(k)(0));
  }
  return s;
}

}  // namespace

Gamma1Result gamma1(const PwLinearPath& f) {
  require_scalar(f);
  const std::vector<Point> g = positive_part_of_negation(f);
  std::vector<double> yt{g.front().t};
  std::vector<double> yv{g.front().v};
  double m = g.front().v;
  for (std::size_t k = 1; k < g.size(); ++k) {
    const Point a = g[k - 1];
    const Point b = g[k];
    if (b.v <= m) {
      yt.push_back(b.t);
      yv.push_back(m);
      continue;
    }
    if (a.v < m) {
      const double tc = a.t + (m - a.v) / (b.v - a.v) * (b.t - a.t);
      if (tc > a.t && b.t - tc > 1e-13 * std::max(1.0, b.t)) {
        yt.push_back(tc);
        yv.push_back(m);
      }
    }
    yt.push_back(b.t);
    yv.push_back(b.v);
    m = b.v;
  }
  const double snap = 1e-12 * std::max(1.0, max_abs(f));
  std::vector<double> zv(yt.size());
  for (std::size_t k = 0; k < yt.size(); ++k) {
    double z = f.at(yt[k]) + yv[k];
    if (z < snap) z = 0.0;
    zv[k] = z;
  }
  Gamma1Result out{PwLinearPath::scalar(yt, zv), PwLinearPath::scalar(yt, yv)};
  return out;
}

ArgmaxSet phi_set(const PwLinearPath& f, double t) {
  require_scalar(f);
  if (t < 0.0) throw Error(ErrorKind::argument, "phi_set needs t >= 0");
  const std::vector<Point> pts = negation_up_to(f, t);
  ArgmaxSet out;
  out.level = pts.front().v;
  for (const Point& p : pts) out.level = std::max(out.level, p.v);
  const double tol = 1e-12 * std::max(1.0, std::abs(out.level));
  bool prev_at = false;
  for (const Point& p : pts) {
    const bool at = p.v >= out.level - tol;
    if (at) {
      if (prev_at) {
        out.intervals.back().second = p.t;
      } else {
        out.intervals.emplace_back(p.t, p.t);
      }
    }
    prev_at = at;
  }
  return out;
}

double f_functional(const PwLinearPath& f, const PwLinearPath& g, double t) {
  require_scalar(f);
  require_scalar(g);
  const ArgmaxSet phi = phi_set(f, t);
  const double tol = 1e-12 * std::max(1.0, max_abs(f));
  if (phi.level < -tol) return 0.0;
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : phi.intervals) s = std::max(s, sup_neg_g(g, a, b));
  if (phi.level <= tol) return std::max(s, 0.0);
  return s;
}

namespace {

std::vector<double> critical_times(const PwLinearPath& f, const PwLinearPath& g) {
  return merge_times(merge_times(f.times(), g.times()), gamma1(f).y.times());
}

// Limit of F(t + sign*h) as h -> 0+, using affinity in h near 0.
double one_sided(const PwLinearPath& f, const PwLinearPath& g, double t, double h0, int sign) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    const double fa = f_functional(f, g, t + sign * h0 / 2);
    const double fb = f_functional(f, g, t + sign * h0 / 4);
    const double fc = f_functional(f, g, t + sign * h0 / 8);
    const double tol = 1e-9 * (1.0 + std::abs(fa) + std::abs(fc));
    if (std::abs((fa - fb) - 2.0 * (fb - fc)) <= tol) return 2.0 * fc - fb;
    h0 /= 8.0;
  }
  throw Error(ErrorKind::numerical, "one-sided limit of F did not stabilise");
}

}  // namespace

OneSidedValues f_functional_limits(const PwLinearPath& f, const PwLinearPath& g, double t) {
  OneSidedValues out;
  out.value = f_functional(f, g, t);
  const std::vector<double> crit = critical_times(f, g);
  const double tiny = 1e-13 * std::max(1.0, t);
  if (t <= 0.0) {
    out.left = out.value;
  } else {
    double prev = 0.0;
    for (double c : crit) {
      if (c < t - tiny) prev = c;
    }
    out.left = one_sided(f, g, t, (t - prev) / 4.0, -1);
  }
  double next = -1.0;
  for (double c : crit) {
    if (c > t + tiny) {
      next = c;
      break;
    }
  }
  const double h0 = next > 0.0 ? (next - t) / 4.0 : 1.0;
  out.right = one_sided(f, g, t, h0, +1);
  return out;
}

double nabla_gamma1(const PwLinearPath& f, const PwLinearPath& g, double t) {
  return g.at(t) + f_functional(f, g, t);
}

double fd_oracle(const PwLinearPath& f, const PwLinearPath& g, double t, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::argument, "fd_oracle needs eps > 0");
  const PwLinearPath fe = linear_combination(1.0, f, eps, g);
  return (gamma1(fe).z.at(t) - gamma1(f).z.at(t)) / eps;
}

}  // namespace skorokhod
