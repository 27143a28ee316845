#include <cmath>

#include "skorokhod/rbm.hpp"
#include "skorokhod/sm1d.hpp"
#include "support.hpp"

using namespace skorokhod;
using namespace skorokhod::test;

namespace {

RbmParams oblique() {
  RbmParams p;
  p.x << 0.2, 0.3;
  p.b << -0.5, -0.3;
  p.sigma << 1.0, 0.2, 0.1, 0.8;
  p.r = oblique_directions();
  return p;
}

}  // namespace

TEST(KeyedNormal, DeterministicWithStandardMoments) {
  EXPECT_EQ(keyed_normal(7, 3, 1), keyed_normal(7, 3, 1));
  EXPECT_NE(keyed_normal(7, 3, 1), keyed_normal(7, 3, 0));
  EXPECT_NE(keyed_normal(7, 3, 1), keyed_normal(8, 3, 1));
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = keyed_normal(1, static_cast<std::uint64_t>(i), 0);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(RbmParams, Validation) {
  RbmParams p = oblique();
  EXPECT_NO_THROW(p.validate());
  p.x << -0.1, 0.0;
  EXPECT_TRUE(throws_kind([&] { p.validate(); }, ErrorKind::argument));
  RbmParams q = oblique();
  q.r << 1.0, 2.0, 1.0, 1.0;  // rho(Q) = sqrt(2)
  EXPECT_TRUE(throws_kind([&] { q.validate(); }, ErrorKind::argument));
  Perturbation bad;
  bad.v << 1.0, 0.0, 0.0, 0.0;
  EXPECT_TRUE(throws_kind([&] { bad.validate(oblique()); }, ErrorKind::argument));
  RbmParams corner = oblique();
  corner.x << 0.0, 0.3;
  Perturbation inward;
  inward.y << -1.0, 0.0;
  EXPECT_TRUE(throws_kind([&] { inward.validate(corner); }, ErrorKind::argument));
}

TEST(Rbm, DeterministicInteriorPath) {
  RbmParams p;
  p.x << 1.0, 1.0;
  p.b << 1.0, 1.0;
  p.sigma.setZero();
  const SamplePath s = simulate_rbm(p, uniform_grid(1.0, 0.01), 3);
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    EXPECT_NEAR(s.esp.z.value(k)(0), 1.0 + s.grid[k], 1e-14);
    EXPECT_NEAR(s.esp.z.value(k)(1), 1.0 + s.grid[k], 1e-14);
  }
  Perturbation y;
  y.y << 0.5, -2.0;
  const PathwiseDerivative d = pathwise_derivative(s, y);
  for (std::size_t k = 0; k < d.theta.size(); ++k) EXPECT_EQ(d.theta.value(k), y.y);
  const PathwiseDerivative zero = pathwise_derivative(s, Perturbation{});
  for (std::size_t k = 0; k < zero.theta.size(); ++k) EXPECT_TRUE(zero.theta.value(k).isZero(0.0));
}

TEST(Rbm, DriftIntoFaceReducesToOneDimension) {
  RbmParams p;
  p.x << 1.0, 1.0;
  p.b << -1.0, 0.0;
  p.sigma.setZero();
  p.r = oblique_directions();
  // Z2 = 1 - L1 reaches the corner at t = 2; stop before it.
  const auto grid = uniform_grid(1.5, 1.0 / 64);
  const SamplePath s = simulate_rbm(p, grid, 1);
  const PwLinearPath f = s.x.component(0);
  const Gamma1Result r = gamma1(f);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_NEAR(s.esp.z.value(k)(0), r.z.at(grid[k]), 1e-13);
  // Drift perturbation c = (0.5, 0): d/d eps of the first component is
  // psi + F(f, psi) by the 1-D formula, the second picks up -F along d_1.
  Perturbation c;
  c.c << 0.5, 0.0;
  const PathwiseDerivative d = pathwise_derivative(s, c);
  const PwLinearPath g = d.psi.component(0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const double expect = nabla_gamma1(f, g, t);
    EXPECT_NEAR(d.theta.value(k)(0), expect, 1e-12) << t;
    EXPECT_NEAR(d.theta.value(k)(1), -(expect - g.at(t)), 1e-12) << t;
  }
  const auto fd = fd_derivative(s, c, 1e-3);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(grid[k] - 1.0) < 0.03) continue;
    EXPECT_NEAR(fd[k](0), d.theta.value(k)(0), 1e-9);
  }
}

TEST(Rbm, FiniteDifferencesOnInteriorPathAreExact) {
  RbmParams p;
  p.x << 5.0, 5.0;
  p.sigma << 0.3, 0.0, 0.1, 0.2;
  const SamplePath s = simulate_rbm(p, uniform_grid(1.0, 1.0 / 256), 9);
  Perturbation q;
  q.y << 1.0, 2.0;
  q.c << -1.0, 0.5;
  q.theta << 0.1, 0.2, 0.0, 0.3;
  const auto fd = fd_derivative(s, q, 1e-2);
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    const Vec expect = q.y + q.c * s.grid[k] + q.theta * s.w[k];
    EXPECT_LE((fd[k] - expect).cwiseAbs().maxCoeff(), 1e-11);
  }
  for (const Vec& v : fd_derivative(s, Perturbation{}, 1e-3)) EXPECT_TRUE(v.isZero(0.0));
}

TEST(Rbm, EpsilonTooLarge) {
  const SamplePath s = simulate_rbm(oblique(), uniform_grid(1.0, 1.0 / 64), 2);
  Perturbation v;
  v.v << 0.0, 5.0, 0.0, 0.0;
  EXPECT_TRUE(throws_kind([&] { fd_derivative(s, v, 1.0); }, ErrorKind::epsilon_too_large));
}

TEST(Rbm, PathInvariantsAndLinearity) {
  const SamplePath s = simulate_rbm(oblique(), uniform_grid(1.0, 1.0 / 1024), 4);
  const EsmResiduals r = esm_residuals(s.params.sp(), s.esp);
  EXPECT_LE(std::max({r.identity, r.domain, r.ry, r.complementarity, r.monotonicity}), 1e-9);
  Perturbation a, b;
  a.y << 1.0, 0.0;
  a.v << 0.0, 0.3, -0.2, 0.0;
  b.c << 0.2, -0.4;
  b.theta << 0.0, 0.1, 0.2, 0.0;
  const auto da = pathwise_derivative(s, a);
  const auto db = pathwise_derivative(s, b);
  const auto dab = pathwise_derivative(s, 2.0 * a + (-0.5) * b);
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    const Vec lin = 2.0 * da.dp.phi.value(k) - 0.5 * db.dp.phi.value(k);
    EXPECT_LE((dab.dp.phi.value(k) - lin).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Rbm, BatchIsOrderedAndReproducible) {
  Perturbation q;
  q.y << 1.0, -0.5;
  const auto grid = uniform_grid(1.0, 1.0 / 512);
  const std::vector<std::uint64_t> seeds{5, 3, 9};
  const auto a = run_rbm_batch(oblique(), q, grid, seeds, {1e-2, 1e-3}, 4, 3);
  const auto b = run_rbm_batch(oblique(), q, grid, seeds, {1e-2, 1e-3}, 4, 1);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, seeds[i]);
    EXPECT_EQ(a[i].comparison.error, b[i].comparison.error);
    for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_EQ(a[i].path.esp.z.value(k), b[i].path.esp.z.value(k));
  }
}

TEST(Jitter, ReportsOnSimplePaths) {
  RbmParams p;
  p.x << 1.0, 1.0;
  p.sigma.setZero();
  const JitterReport interior = jitter_diagnostics(simulate_rbm(p, uniform_grid(1.0, 0.01), 1));
  EXPECT_EQ(interior.boundary_touches, 0u);
  EXPECT_EQ(interior.corner_time_fraction, 0.0);
  // Drift along the face: Y stays constant while Z sits on F_1.
  p.x << 0.0, 1.0;
  p.b << 0.0, 1.0;
  const JitterReport along = jitter_diagnostics(simulate_rbm(p, uniform_grid(1.0, 0.01), 1));
  EXPECT_GT(along.boundary_touches, 0u);
  EXPECT_EQ(along.constant_y_fraction, 1.0);
}
