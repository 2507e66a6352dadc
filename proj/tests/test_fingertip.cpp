#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "morphtip/errors.hpp"
#include "morphtip/fingertip.hpp"
#include "oracles.hpp"

namespace morphtip {
namespace {

constexpr auto PX = static_cast<std::size_t>(Facet::PosX);
constexpr auto NX = static_cast<std::size_t>(Facet::NegX);
constexpr auto PY = static_cast<std::size_t>(Facet::PosY);
constexpr auto NY = static_cast<std::size_t>(Facet::NegY);

double polyline_length(const Polyline& line) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) len += (line[i + 1] - line[i]).norm();
  return len;
}

double max_line_deviation(const Polyline& line) {
  const Vec2 a = line.front();
  const Vec2 d = (line.back() - a).normalized();
  double worst = 0.0;
  for (const Vec2& p : line) {
    const Vec2 r = p - a;
    worst = std::max(worst, std::abs(r.x() * d.y() - r.y() * d.x()));
  }
  return worst;
}

TEST(TerraceEquilibrium, SymmetricActuationIsLevel) {
  for (double phi : {-0.3, 0.0, 0.14, 1.0}) {
    EXPECT_EQ(terrace_equilibrium(phi, phi, 10.0, 0.0), 0.0);
  }
}

TEST(TerraceEquilibrium, OppositeActuationMatchesTilt) {
  for (double phi : {-0.2, 0.05, 0.13}) {
    EXPECT_EQ(terrace_equilibrium(phi, -phi, 10.0, 0.0), phi);
  }
}

TEST(TerraceEquilibrium, LoadOnlyAgreesWithGridMinimum) {
  const double k = 10.0;
  const double tau = 3.0;
  const double psi = terrace_equilibrium(0.0, 0.0, k, tau);
  EXPECT_DOUBLE_EQ(psi, tau / (2 * k));
  const double grid =
      oracle::grid_argmin([&](double x) { return oracle::terrace_energy(0, 0, k, tau, x); }, -1.0, 1.0);
  EXPECT_NEAR(psi, grid, 1e-9);
}

TEST(TerraceEquilibrium, RandomCasesAgreeWithGridMinimum) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-0.6, 0.6);
  std::uniform_real_distribution<double> stiff(0.5, 50.0);
  std::uniform_real_distribution<double> load(-20.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    const double a = ang(rng), b = ang(rng), k = stiff(rng), tau = load(rng);
    const double psi = terrace_equilibrium(a, b, k, tau);
    const double grid = oracle::grid_argmin(
        [&](double x) { return oracle::terrace_energy(a, b, k, tau, x); }, -30.0, 30.0);
    ASSERT_NEAR(psi, grid, 1e-9) << i;
  }
}

TEST(TerraceEquilibrium, RejectsBadStiffness) {
  EXPECT_THROW(terrace_equilibrium(0.1, 0.1, 0.0), ModelError);
  EXPECT_THROW(terrace_equilibrium(std::nan(""), 0.1, 1.0), ModelError);
}

TEST(SettleTerrace, SymmetricAndPlanarLimits) {
  const FingertipConfig cfg;
  const double t = inverse_facet(cfg.linkage, deg_to_rad(8.0));
  EXPECT_NEAR(settle_terrace(cfg, t, t), 0.0, 1e-12);
  const auto pair = solve_planar_pair(cfg.linkage, deg_to_rad(5.0));
  EXPECT_NEAR(settle_terrace(cfg, pair.theta_pos, pair.theta_neg), deg_to_rad(5.0), 1e-12);
}

TEST(SettleTerrace, MatchesGridMinimumOfCreaseEnergy) {
  const FingertipConfig cfg;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(cfg.range.theta_min, cfg.range.theta_max);
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng), b = u(rng);
    const double psi = settle_terrace(cfg, a, b);
    const double grid = oracle::grid_argmin(
        [&](double x) { return crease_energy(cfg, a, b, x); }, -0.7, 0.7, 1e-10);
    // Double-precision energy is flat to ~1e-8 rad around its minimum.
    ASSERT_NEAR(psi, grid, 1e-6) << i;
  }
}

TEST(SettleTerrace, LoadTiltsTowardTorque) {
  const FingertipConfig cfg;
  EXPECT_GT(settle_terrace(cfg, 0.0, 0.0, 2.0), 0.0);
  EXPECT_LT(settle_terrace(cfg, 0.0, 0.0, -2.0), 0.0);
}

TEST(PlanPrimitive, FlatIsAllZero) {
  const FingertipConfig cfg;
  const auto s = plan_primitive(cfg, MorphPrimitive::flat());
  for (double t : s.thetas) EXPECT_EQ(t, 0.0);
  for (double p : s.phis) EXPECT_EQ(p, 0.0);
  EXPECT_EQ(s.terrace.x, 0.0);
  EXPECT_EQ(s.terrace.y, 0.0);
  for (const auto* line : {&s.profile_x, &s.profile_y}) {
    ASSERT_EQ(line->size(), 4u);
    for (const Vec2& p : *line) EXPECT_EQ(p.y(), 0.0);
  }
}

TEST(PlanPrimitive, ConcaveEightDegrees) {
  const FingertipConfig cfg;
  const double phi = deg_to_rad(8.0);
  const auto s = plan_primitive(cfg, MorphPrimitive::concave(phi));
  const double expected = inverse_facet(cfg.linkage, phi);
  for (double t : s.thetas) {
    EXPECT_EQ(t, expected);
    EXPECT_GT(t, 0.0);
  }
  for (double p : s.phis) EXPECT_NEAR(p, phi, 1e-6);
  EXPECT_EQ(s.terrace.x, 0.0);
  for (const auto* line : {&s.profile_x, &s.profile_y}) {
    const auto& l = *line;
    EXPECT_NEAR(l[0].y() - l[1].y(), cfg.facet_len * std::sin(phi), 1e-9);
    EXPECT_NEAR(l[3].y() - l[2].y(), cfg.facet_len * std::sin(phi), 1e-9);
    EXPECT_EQ(l[1].y(), 0.0);
    EXPECT_EQ(l[2].y(), 0.0);
  }
}

TEST(PlanPrimitive, ConvexMirrorsConcave) {
  const FingertipConfig cfg;
  const auto s = plan_primitive(cfg, MorphPrimitive::convex(deg_to_rad(-8.0)));
  for (double t : s.thetas) EXPECT_LT(t, 0.0);
  for (double p : s.phis) EXPECT_NEAR(p, deg_to_rad(-8.0), 1e-6);
  EXPECT_LT(s.profile_x[3].y(), 0.0);
}

TEST(PlanPrimitive, TiltedFiveDegrees) {
  const FingertipConfig cfg;
  const auto s = plan_primitive(cfg, MorphPrimitive::tilted(deg_to_rad(5.0), 0.0));
  EXPECT_GT(s.thetas[PX], 0.0);
  EXPECT_LT(s.thetas[NX], 0.0);
  EXPECT_NEAR(s.thetas[PY], 0.0, 1e-14);
  EXPECT_NEAR(s.thetas[NY], 0.0, 1e-14);
  EXPECT_EQ(s.terrace.x, deg_to_rad(5.0));
  EXPECT_EQ(s.terrace.y, 0.0);
  EXPECT_LT(s.collinearity[0], 1e-9);
  EXPECT_LT(s.collinearity[1], 1e-9);
  EXPECT_LT(max_line_deviation(s.profile_x), 1e-9);
  const Vec2 dir = (s.profile_x.back() - s.profile_x.front()).normalized();
  EXPECT_NEAR(std::atan2(dir.y(), dir.x()), deg_to_rad(5.0), 1e-12);
  // The terrace the planner reports is also where the springs settle.
  EXPECT_NEAR(settle_terrace(cfg, s.thetas[PX], s.thetas[NX]), s.terrace.x, 1e-9);
}

TEST(PlanPrimitive, ReadBackReproducesDegree) {
  const FingertipConfig cfg;
  std::mt19937_64 rng(13);
  const auto [lo, hi] = facet_range(cfg.linkage, cfg.range);
  std::uniform_real_distribution<double> up(1e-3, hi), down(lo, -1e-3);
  for (int i = 0; i < 200; ++i) {
    const double a = up(rng), b = down(rng);
    for (double phi : plan_primitive(cfg, MorphPrimitive::concave(a)).phis) ASSERT_NEAR(phi, a, 1e-6);
    for (double phi : plan_primitive(cfg, MorphPrimitive::convex(b)).phis) ASSERT_NEAR(phi, b, 1e-6);
  }
}

TEST(PlanPrimitive, UnreachablePropagates) {
  const FingertipConfig cfg;
  EXPECT_THROW(plan_primitive(cfg, MorphPrimitive::concave(deg_to_rad(80.0))), UnreachableError);
  EXPECT_THROW(plan_primitive(cfg, MorphPrimitive::tilted(deg_to_rad(12.0), 0.0)), UnreachableError);
}

TEST(MorphPrimitive, DepthSignMustMatch) {
  EXPECT_THROW(MorphPrimitive::concave(-0.1), ModelError);
  EXPECT_THROW(MorphPrimitive::convex(0.1), ModelError);
  EXPECT_THROW(MorphPrimitive::concave(0.0), ModelError);
}

TEST(SurfaceProfile, LengthIsPreservedAndSimple) {
  const FingertipConfig cfg;
  const double total = 2.0 * (cfg.linkage.l_oc() + cfg.facet_len);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(cfg.range.theta_min, cfg.range.theta_max);
  std::uniform_real_distribution<double> tilt(-0.15, 0.15);
  for (int i = 0; i < 500; ++i) {
    const Polyline line = surface_profile(cfg, u(rng), u(rng), tilt(rng));
    ASSERT_NEAR(polyline_length(line), total, 1e-9);
    for (std::size_t k = 0; k + 1 < line.size(); ++k) ASSERT_LT(line[k].x(), line[k + 1].x());
  }
}

TEST(Decoupling, YAnglesDoNotTouchXPlane) {
  const FingertipConfig cfg;
  const auto a = state_from_thetas(cfg, {0.1, -0.05, 0.0, 0.0});
  const auto b = state_from_thetas(cfg, {0.1, -0.05, 0.2, -0.3});
  EXPECT_EQ(a.terrace.x, b.terrace.x);
  EXPECT_EQ(a.profile_x, b.profile_x);
  EXPECT_EQ(a.collinearity[0], b.collinearity[0]);
  EXPECT_NE(a.terrace.y, b.terrace.y);
}

TEST(StateFromThetas, RejectsOutOfRange) {
  const FingertipConfig cfg;
  EXPECT_THROW(state_from_thetas(cfg, {0.5, 0, 0, 0}), OutOfRangeError);
}

TEST(PointerTop, LevelAndSingleAxis) {
  FingertipConfig cfg;
  cfg.rod_len = 100.0;
  const Vec3 up = pointer_top(cfg, 0.0, 0.0);
  EXPECT_EQ(up, Vec3(0, 0, 100));
  const double psi = deg_to_rad(7.0);
  const Vec3 tip = pointer_top(cfg, psi, 0.0);
  EXPECT_NEAR(tip.x(), 0.0, 1e-12);
  EXPECT_NEAR(tip.y(), -100 * std::sin(psi), 1e-12);
  EXPECT_NEAR(tip.z(), 100 * std::cos(psi), 1e-12);
}

TEST(PointerTop, MatchesExplicitRotationComposition) {
  FingertipConfig cfg;
  cfg.rod_len = 80.0;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int i = 0; i < 200; ++i) {
    const double ax = u(rng), ay = u(rng);
    // Ry(ay) * Rx(ax) * e_z written out by hand.
    const Vec3 expected(80 * std::sin(ay) * std::cos(ax), -80 * std::sin(ax),
                        80 * std::cos(ay) * std::cos(ax));
    ASSERT_LT((pointer_top(cfg, ax, ay) - expected).norm(), 1e-12);
  }
}

TEST(PointerTop, MirrorSymmetry) {
  const FingertipConfig cfg;
  for (double psi : {0.01, 0.1, 0.3}) {
    for (double other : {0.0, 0.05, -0.2}) {
      // About x: tips mirror across the x-z plane.
      const Vec3 a = pointer_top(cfg, psi, other);
      const Vec3 b = pointer_top(cfg, -psi, other);
      EXPECT_EQ(a.x(), b.x());
      EXPECT_EQ(a.y(), -b.y());
      EXPECT_EQ(a.z(), b.z());
      // About y: tips mirror across the y-z plane.
      const Vec3 c = pointer_top(cfg, other, psi);
      const Vec3 d = pointer_top(cfg, other, -psi);
      EXPECT_EQ(c.x(), -d.x());
      EXPECT_EQ(c.y(), d.y());
      EXPECT_EQ(c.z(), d.z());
    }
  }
}

TEST(PointerTop, EightPosesFormNearSquare) {
  FingertipConfig cfg;
  cfg.rod_len = 100.0;
  const double m = deg_to_rad(5.0);
  const double s = std::sin(m), c = std::cos(m);
  for (int ix : {-1, 0, 1}) {
    for (int iy : {-1, 0, 1}) {
      if (ix == 0 && iy == 0) continue;
      const Vec3 tip = pointer_top(cfg, ix * m, iy * m);
      if (ix != 0 && iy != 0) {
        EXPECT_NEAR(std::abs(tip.x()), 100 * s * c, 1e-9);
        EXPECT_NEAR(std::abs(tip.y()), 100 * s, 1e-9);
        // Equal to first order; the gap is 100 s (1 - c) ~ 100 m^3 / 2.
        EXPECT_LT(std::abs(std::abs(tip.x()) - std::abs(tip.y())), 100 * m * m * m);
      } else {
        EXPECT_NEAR(std::hypot(tip.x(), tip.y()), 100 * s, 1e-9);
      }
    }
  }
}

TEST(PointerTop, RejectsLargeRotations) {
  EXPECT_THROW(pointer_top(FingertipConfig{}, 0.8, 0.0), ModelError);
}

TEST(Trajectory, FlatToFlatIsSingleState) {
  const FingertipConfig cfg;
  const auto traj = transition_trajectory(cfg, MorphPrimitive::flat(), MorphPrimitive::flat());
  ASSERT_EQ(traj.size(), 1u);
  for (double t : traj[0].thetas) EXPECT_EQ(t, 0.0);
}

TEST(Trajectory, ConcaveMaxToConvexMinIsThirteenSteps) {
  const FingertipConfig cfg;
  const auto [lo, hi] = facet_range(cfg.linkage, cfg.range);
  const auto traj =
      transition_trajectory(cfg, MorphPrimitive::concave(hi), MorphPrimitive::convex(lo));
  ASSERT_EQ(traj.size(), 13u);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      ASSERT_LT(traj[k].phis[i], traj[k - 1].phis[i]);
      ASSERT_LE(std::abs(traj[k].thetas[i] - traj[k - 1].thetas[i]), cfg.step + 1e-12);
    }
    EXPECT_NEAR(traj[k].terrace.x, 0.0, 1e-12);
  }
}

TEST(Trajectory, FlatToTiltedReportsResiduals) {
  const FingertipConfig cfg;
  const auto traj = transition_trajectory(cfg, MorphPrimitive::flat(),
                                          MorphPrimitive::tilted(deg_to_rad(5.0), 0.0));
  ASSERT_GE(traj.size(), 2u);
  EXPECT_LT(traj.front().collinearity[0], 1e-9);
  EXPECT_LT(traj.back().collinearity[0], 1e-9);
  EXPECT_NEAR(traj.back().terrace.x, deg_to_rad(5.0), 1e-15);
  double tilt_prev = -1.0;
  for (const auto& s : traj) {
    EXPECT_GE(s.collinearity[0], 0.0);
    EXPECT_GT(s.terrace.x, tilt_prev);
    tilt_prev = s.terrace.x;
  }
}

}  // namespace
}  // namespace morphtip
