#include "skorokhod/paths.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "skorokhod/errors.hpp"

namespace skorokhod {

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw Error(ErrorKind::argument, "path needs at least one breakpoint");
  if (times.front() != 0.0) throw Error(ErrorKind::argument, "path must start at t = 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw Error(ErrorKind::argument, "path times must be strictly increasing");
    }
  }
}

void check_values(const std::vector<double>& times, const std::vector<Vec>& values) {
  if (values.size() != times.size()) throw Error(ErrorKind::argument, "times/values length mismatch");
  const auto d = values.front().size();
  for (const Vec& v : values) {
    if (v.size() != d) throw Error(ErrorKind::argument, "path value dimension changes");
  }
}

// Index k with times[k] <= t < times[k+1], clamped to [0, size-1].
std::size_t segment_index(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

}  // namespace

// ---------------------------------------------------------------- PwLinearPath

PwLinearPath::PwLinearPath(std::vector<double> times, std::vector<Vec> values)
    : times_(std::move(times)), values_(std::move(values)) {
  check_times(times_);
  check_values(times_, values_);
}

PwLinearPath PwLinearPath::constant(const Vec& value, double horizon) {
  if (horizon > 0.0) return PwLinearPath({0.0, horizon}, {value, value});
  return PwLinearPath({0.0}, {value});
}

PwLinearPath PwLinearPath::scalar(std::vector<double> times, const std::vector<double>& values) {
  std::vector<Vec> v;
  v.reserve(values.size());
  for (double x : values) v.push_back(Vec::Constant(1, x));
  return PwLinearPath(std::move(times), std::move(v));
}

Vec PwLinearPath::operator()(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const std::size_t k = segment_index(times_, t);
  if (t == times_[k]) return values_[k];
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return values_[k] + w * (values_[k + 1] - values_[k]);
}

double PwLinearPath::at(double t, int component) const { return (*this)(t)(component); }

PwLinearPath PwLinearPath::component(int i) const {
  std::vector<Vec> v;
  v.reserve(values_.size());
  for (const Vec& x : values_) v.push_back(Vec::Constant(1, x(i)));
  return PwLinearPath(times_, std::move(v));
}

// ---------------------------------------------------------------- CadlagStepPath

CadlagStepPath::CadlagStepPath(std::vector<double> times, std::vector<Vec> values,
                               std::vector<Vec> left_values)
    : times_(std::move(times)), values_(std::move(values)), left_(std::move(left_values)) {
  check_times(times_);
  check_values(times_, values_);
  if (left_.size() != times_.size()) throw Error(ErrorKind::argument, "left-limit length mismatch");
  if (left_.front().size() == 0) left_.front() = values_.front();
}

Vec CadlagStepPath::operator()(double t) const { return values_[segment_index(times_, t)]; }

Vec CadlagStepPath::left_limit(double t) const {
  if (t <= times_.front()) return values_.front();
  const std::size_t k = segment_index(times_, t);
  if (t == times_[k]) return left(k);
  return values_[k];
}

// ---------------------------------------------------------------- calculus

double sup_norm(const PwLinearPath& f, double t) {
  if (t < 0.0) throw Error(ErrorKind::argument, "sup_norm needs t >= 0");
  // |f| is convex along each linear segment, so its maximum over a segment is
  // attained at an endpoint.
  double m = f(t).norm();
  for (std::size_t k = 0; k < f.size() && f.times()[k] <= t; ++k) m = std::max(m, f.value(k).norm());
  return m;
}

double sup_norm(const CadlagStepPath& f, double t) {
  if (t < 0.0) throw Error(ErrorKind::argument, "sup_norm needs t >= 0");
  double m = 0.0;
  for (std::size_t k = 0; k < f.size() && f.times()[k] <= t; ++k) m = std::max(m, f.value(k).norm());
  return m;
}

PwLinearPath time_shift(const PwLinearPath& f, double s, const Vec& anchor) {
  if (s < 0.0) throw Error(ErrorKind::argument, "time_shift needs S >= 0");
  const Vec base = f(s);
  std::vector<double> t{0.0};
  std::vector<Vec> v{anchor};
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.times()[k] > s) {
      t.push_back(f.times()[k] - s);
      v.push_back(anchor + (f.value(k) - base));
    }
  }
  return PwLinearPath(std::move(t), std::move(v));
}

std::vector<double> merge_times(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  out.reserve(all.size());
  for (double t : all) {
    if (!out.empty() && t - out.back() <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) continue;
    out.push_back(t);
  }
  return out;
}

PwLinearPath refine(const PwLinearPath& f, const std::vector<double>& grid) {
  std::vector<double> extra;
  for (double t : grid) {
    if (t >= 0.0) extra.push_back(t);
  }
  const std::vector<double> times = merge_times(f.times(), extra);
  std::vector<Vec> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(f(t));
  return PwLinearPath(times, std::move(values));
}

PwLinearPath linear_combination(double a, const PwLinearPath& f, double b, const PwLinearPath& g) {
  if (f.dim() != g.dim()) throw Error(ErrorKind::argument, "path dimension mismatch");
  const std::vector<double> times = merge_times(f.times(), g.times());
  std::vector<Vec> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(a * f(t) + b * g(t));
  return PwLinearPath(times, std::move(values));
}

PwLinearPath operator+(const PwLinearPath& f, const PwLinearPath& g) {
  return linear_combination(1.0, f, 1.0, g);
}

PwLinearPath operator-(const PwLinearPath& f, const PwLinearPath& g) {
  return linear_combination(1.0, f, -1.0, g);
}

PwLinearPath operator*(double a, const PwLinearPath& f) {
  std::vector<Vec> values;
  values.reserve(f.size());
  for (const Vec& v : f.values()) values.push_back(a * v);
  return PwLinearPath(f.times(), std::move(values));
}

std::vector<double> uniform_grid(double horizon, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::argument, "grid step must be positive");
  if (!(horizon > 0.0)) throw Error(ErrorKind::argument, "horizon must be positive");
  const auto n = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  std::vector<double> g;
  g.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) g.push_back(static_cast<double>(k) * dt);
  if (horizon - g.back() > 1e-12 * horizon) g.push_back(horizon);
  return g;
}

// ---------------------------------------------------------------- CSV

namespace {

void write_header(std::ostream& os, int dim, const char* prefix, bool with_left) {
  os << 't';
  for (int i = 1; i <= dim; ++i) os << ',' << prefix << i;
  if (with_left) {
    for (int i = 1; i <= dim; ++i) os << ",left_" << prefix << i;
  }
  os << '\n';
}

std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t& columns) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::io, "empty CSV");
  columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "nan" || cell == "NaN") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorKind::io, "bad CSV cell '" + cell + "'");
      }
    }
    if (row.size() != columns) throw Error(ErrorKind::io, "CSV row has wrong column count");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_csv(std::ostream& os, const PwLinearPath& f, const char* prefix) {
  const auto old = os.precision(17);
  write_header(os, f.dim(), prefix, false);
  for (std::size_t k = 0; k < f.size(); ++k) {
    os << f.times()[k];
    for (int i = 0; i < f.dim(); ++i) os << ',' << f.value(k)(i);
    os << '\n';
  }
  os.precision(old);
}

void write_csv(std::ostream& os, const CadlagStepPath& f, const char* prefix) {
  const auto old = os.precision(17);
  write_header(os, f.dim(), prefix, true);
  for (std::size_t k = 0; k < f.size(); ++k) {
    os << f.times()[k];
    for (int i = 0; i < f.dim(); ++i) os << ',' << f.value(k)(i);
    for (int i = 0; i < f.dim(); ++i) {
      if (k == 0) {
        os << ",nan";
      } else {
        os << ',' << f.left(k)(i);
      }
    }
    os << '\n';
  }
  os.precision(old);
}

PwLinearPath read_pw_linear_csv(std::istream& is) {
  std::size_t cols = 0;
  const auto rows = read_rows(is, cols);
  if (cols < 2) throw Error(ErrorKind::io, "path CSV needs t and at least one value column");
  std::vector<double> t;
  std::vector<Vec> v;
  for (const auto& r : rows) {
    t.push_back(r[0]);
    Vec x(static_cast<Eigen::Index>(cols - 1));
    for (std::size_t i = 1; i < cols; ++i) x(static_cast<Eigen::Index>(i - 1)) = r[i];
    v.push_back(std::move(x));
  }
  return PwLinearPath(std::move(t), std::move(v));
}

CadlagStepPath read_step_csv(std::istream& is) {
  std::size_t cols = 0;
  const auto rows = read_rows(is, cols);
  if (cols < 3 || (cols - 1) % 2 != 0) throw Error(ErrorKind::io, "step CSV needs t, values, left values");
  const auto d = static_cast<Eigen::Index>((cols - 1) / 2);
  std::vector<double> t;
  std::vector<Vec> v;
  std::vector<Vec> left;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    t.push_back(r[0]);
    Vec x(d);
    Vec l(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      x(i) = r[static_cast<std::size_t>(1 + i)];
      l(i) = r[static_cast<std::size_t>(1 + d + i)];
    }
    v.push_back(x);
    left.push_back(k == 0 ? x : l);
  }
  return CadlagStepPath(std::move(t), std::move(v), std::move(left));
}

}  // namespace skorokhod
