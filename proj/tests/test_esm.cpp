#include "skorokhod/esm.hpp"
#include "skorokhod/sm1d.hpp"
#include "support.hpp"

using namespace skorokhod;
using namespace skorokhod::test;

TEST(Esm, OneDimensionalMatchesGamma1) {
  std::mt19937_64 rng(31);
  const SPData sp = one_dim_sp();
  for (int i = 0; i < 50; ++i) {
    const PwLinearPath f = random_scalar(rng, 12);
    const EspSolution sol = solve_esm(sp, f, uniform_grid(1.0, 0.05));
    const Gamma1Result r = gamma1(f);
    for (std::size_t k = 0; k < sol.grid.size(); ++k) {
      EXPECT_NEAR(sol.z.value(k)(0), r.z.at(sol.grid[k]), 1e-13);
      EXPECT_NEAR(sol.y.value(k)(0), r.y.at(sol.grid[k]), 1e-13);
    }
  }
}

TEST(Esm, NormalQuadrantDecouples) {
  std::mt19937_64 rng(32);
  const SPData sp = quadrant_sp(Mat::Identity(2, 2));
  const PwLinearPath x = random_on(rng, 2, uniform_grid(1.0, 0.02), 0.5);
  const EspSolution sol = solve_esm(sp, x, x.times());
  for (int i = 0; i < 2; ++i) {
    const Gamma1Result r = gamma1(x.component(i));
    for (std::size_t k = 0; k < sol.grid.size(); ++k) EXPECT_NEAR(sol.z.value(k)(i), r.z.at(sol.grid[k]), 1e-13);
  }
}

TEST(Esm, ObliqueQuadrantInvariants) {
  std::mt19937_64 rng(33);
  const SPData sp = quadrant_sp(oblique_directions());
  for (int i = 0; i < 20; ++i) {
    const PwLinearPath x = random_on(rng, 2, uniform_grid(1.0, 0.01), 0.4);
    const EspSolution sol = solve_esm(sp, x, x.times());
    ASSERT_TRUE(sol.l.has_value());
    const EsmResiduals r = esm_residuals(sp, sol);
    EXPECT_LE(r.identity, 1e-12);
    EXPECT_LE(r.domain, 1e-12);
    EXPECT_LE(r.ry, 1e-9);
    EXPECT_LE(r.complementarity, 1e-9);
    EXPECT_LE(r.monotonicity, 1e-9);
    EXPECT_LE(esm_timeshift_residual(sp, sol, sol.grid.size() / 2), 1e-9);
  }
}

TEST(Esm, GridIsMergedWithInputBreakpoints) {
  const SPData sp = one_dim_sp();
  const PwLinearPath f = PwLinearPath::scalar({0.0, 0.3, 1.0}, {1.0, -1.0, 0.0});
  const EspSolution sol = solve_esm(sp, f, {0.0, 0.5, 1.0});
  EXPECT_EQ(sol.grid, (std::vector<double>{0.0, 0.3, 0.5, 1.0}));
  EXPECT_EQ(sol.face_trace[1], FaceSet{0});
  EXPECT_TRUE(sol.face_trace[0].empty());
}

TEST(Esm, LipschitzRatios) {
  std::mt19937_64 rng(34);
  const SPData normal = quadrant_sp(Mat::Identity(2, 2));
  const SPData oblique = quadrant_sp(oblique_directions());
  const auto grid = uniform_grid(1.0, 0.02);
  double worst_normal = 0.0;
  double worst_oblique = 0.0;
  for (int i = 0; i < 30; ++i) {
    const PwLinearPath x1 = random_on(rng, 2, grid, 0.5);
    const PwLinearPath x2 = random_on(rng, 2, grid, 0.5);
    worst_normal = std::max(worst_normal, lipschitz_report(normal, x1, x2, 1.0, grid));
    worst_oblique = std::max(worst_oblique, lipschitz_report(oblique, x1, x2, 1.0, grid));
    EXPECT_TRUE(std::isfinite(local_time_lipschitz_report(oblique, x1, x2, 1.0, grid)));
  }
  EXPECT_LE(worst_normal, 2.0 * std::sqrt(2.0) + 1e-12);
  EXPECT_TRUE(std::isfinite(worst_oblique));
  EXPECT_TRUE(throws_kind([&] {
    const PwLinearPath x = random_on(rng, 2, grid);
    lipschitz_report(normal, x, x, 1.0, grid);
  }, ErrorKind::argument));
}

TEST(Esm, ProjectedLipschitzCheck) {
  const SPData sp = quadrant_sp(Mat::Identity(2, 2));
  const auto grid = uniform_grid(1.0, 0.1);
  const PwLinearPath x1 = PwLinearPath::constant(v2(1.0, 1.0), 1.0);
  const PwLinearPath x2 = PwLinearPath::constant(v2(2.0, 1.5), 1.0);
  EXPECT_FALSE(projected_lipschitz_check(sp, x1, x2, FaceSet{}, 1.0, grid).has_value());
  const PwLinearPath dip({0.0, 0.5, 1.0}, {v2(1.0, 1.0), v2(-1.0, 1.0), v2(1.0, 1.0)});
  EXPECT_TRUE(throws_kind([&] { projected_lipschitz_check(sp, dip, x2, FaceSet{1}, 1.0, grid); }, ErrorKind::trace));
}

TEST(Esm, DecompositionRejectsDecreasingLocalTime) {
  const SPData sp = one_dim_sp();
  const PwLinearPath z = PwLinearPath::scalar({0.0, 1.0}, {0.0, 0.0});
  const PwLinearPath y = PwLinearPath::scalar({0.0, 1.0}, {0.0, -1.0});
  EXPECT_TRUE(throws_kind([&] { decompose_local_times(sp, z, y, {FaceSet{0}, FaceSet{0}}); },
                          ErrorKind::decomposition));
}
