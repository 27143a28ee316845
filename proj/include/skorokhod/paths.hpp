#pragma once

#include <iosfwd>
#include <vector>

#include "skorokhod/linalg.hpp"

namespace skorokhod {

/// Continuous piecewise-linear path on [0, T]: strictly increasing breakpoint
/// times starting at 0, linear in between, constant after the last breakpoint.
class PwLinearPath {
 public:
  PwLinearPath() = default;
  PwLinearPath(std::vector<double> times, std::vector<Vec> values);

  static PwLinearPath constant(const Vec& value, double horizon);
  /// 1-D convenience constructor.
  static PwLinearPath scalar(std::vector<double> times, const std::vector<double>& values);

  int dim() const noexcept { return values_.empty() ? 0 : static_cast<int>(values_.front().size()); }
  std::size_t size() const noexcept { return times_.size(); }
  double horizon() const noexcept { return times_.empty() ? 0.0 : times_.back(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Vec>& values() const noexcept { return values_; }
  const Vec& value(std::size_t k) const { return values_[k]; }

  /// Evaluation; returns the stored value bit-exactly at breakpoints.
  Vec operator()(double t) const;
  double at(double t, int component = 0) const;

  PwLinearPath component(int i) const;

 private:
  std::vector<double> times_;
  std::vector<Vec> values_;
};

/// Right-continuous step path with stored left limits. value(k) holds on
/// [s_k, s_{k+1}); left(k) is the limit from the left at s_k (k >= 1).
class CadlagStepPath {
 public:
  CadlagStepPath() = default;
  CadlagStepPath(std::vector<double> times, std::vector<Vec> values, std::vector<Vec> left_values);

  int dim() const noexcept { return values_.empty() ? 0 : static_cast<int>(values_.front().size()); }
  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Vec>& values() const noexcept { return values_; }
  const std::vector<Vec>& left_values() const noexcept { return left_; }
  const Vec& value(std::size_t k) const { return values_[k]; }
  /// Left limit at event k; for k = 0 returns value(0).
  const Vec& left(std::size_t k) const { return k == 0 ? values_[0] : left_[k]; }

  Vec operator()(double t) const;
  Vec left_limit(double t) const;

 private:
  std::vector<double> times_;
  std::vector<Vec> values_;
  std::vector<Vec> left_;
};

/// sup_{s in [0,t]} |f(s)| (Euclidean).
double sup_norm(const PwLinearPath& f, double t);
double sup_norm(const CadlagStepPath& f, double t);

/// anchor + f(S + .) - f(S), with breakpoints re-based to start at 0.
PwLinearPath time_shift(const PwLinearPath& f, double s, const Vec& anchor);

/// Same function with the breakpoint set unioned with `grid` (restricted to
/// [0, horizon]).
PwLinearPath refine(const PwLinearPath& f, const std::vector<double>& grid);

/// Union of breakpoint sets (sorted, deduplicated).
std::vector<double> merge_times(const std::vector<double>& a, const std::vector<double>& b);

/// a*f + b*g on the union of breakpoints.
PwLinearPath linear_combination(double a, const PwLinearPath& f, double b, const PwLinearPath& g);
PwLinearPath operator+(const PwLinearPath& f, const PwLinearPath& g);
PwLinearPath operator-(const PwLinearPath& f, const PwLinearPath& g);
PwLinearPath operator*(double a, const PwLinearPath& f);

/// Uniform grid 0, dt, 2dt, ..., T (T appended if not a multiple).
std::vector<double> uniform_grid(double horizon, double dt);

void write_csv(std::ostream& os, const PwLinearPath& f, const char* prefix = "v");
void write_csv(std::ostream& os, const CadlagStepPath& f, const char* prefix = "v");
PwLinearPath read_pw_linear_csv(std::istream& is);
CadlagStepPath read_step_csv(std::istream& is);

}  // namespace skorokhod
