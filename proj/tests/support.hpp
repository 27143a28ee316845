#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "skorokhod/errors.hpp"
#include "skorokhod/geometry.hpp"
#include "skorokhod/paths.hpp"

namespace skorokhod::test {

inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline SPData one_dim_sp() {
  return SPData(Mat::Ones(1, 1), Vec::Zero(1), Mat::Ones(1, 1), PiFamily::one_dim);
}

inline SPData quadrant_sp(const Mat& r) { return SPData(Mat::Identity(2, 2), Vec::Zero(2), r, PiFamily::orthant); }

inline Mat oblique_directions() {
  Mat d(2, 2);
  d << 1.0, 0.5, -1.0, 1.0;
  return d;
}

inline PwLinearPath random_scalar(std::mt19937_64& rng, int pieces, double amp = 1.0) {
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  std::uniform_real_distribution<double> uv(-amp, amp);
  std::vector<double> t{0.0, 1.0};
  for (int i = 0; i < pieces - 1; ++i) t.push_back(ut(rng));
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<double> v;
  for (std::size_t i = 0; i < t.size(); ++i) v.push_back(uv(rng));
  return PwLinearPath::scalar(t, v);
}

inline PwLinearPath random_on(std::mt19937_64& rng, int dim, const std::vector<double>& t, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  std::vector<Vec> v;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Vec x(dim);
    for (int j = 0; j < dim; ++j) x(j) = n(rng);
    v.push_back(x);
  }
  return PwLinearPath(t, v);
}

template <class F>
::testing::AssertionResult throws_kind(F&& fn, ErrorKind kind) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() == kind) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "threw " << to_string(e.kind()) << ": " << e.what();
  }
  return ::testing::AssertionFailure() << "did not throw";
}

}  // namespace skorokhod::test
