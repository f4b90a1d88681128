#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dynreg/dynamics.hpp"
#include "dynreg/symmetry.hpp"

namespace dynreg {
namespace {

constexpr double kPi = std::numbers::pi;

// Per-point torque k x_i x y_i at the aligned static state. Both clouds are
// centered at the origin by construction, so offsets equal the raw points.
Vec3 point_torque(const ProblemInstance& inst, std::size_t i) {
  const double k = 2.0 / (inst.sigmas[i] * inst.sigmas[i]);
  return k * inst.model_points[i].cross(inst.scene_points[i]);
}

TEST(Triangle, ThetaZeroFixesVertexOne) {
  const ProblemInstance t = make_equilateral_triangle(1.5, 0.0);
  EXPECT_LE((t.model_points[0] - t.scene_points[0]).norm(), 1e-15);
  EXPECT_LE((t.model_points[1] - t.scene_points[2]).norm(), 1e-15);
  EXPECT_LE((t.model_points[2] - t.scene_points[1]).norm(), 1e-15);
  EXPECT_NEAR(t.scene_points[0].y(), 1.5, 1e-15);
  // clockwise: vertex 2 lies at x > 0
  EXPECT_GT(t.scene_points[1].x(), 0.0);
}

TEST(Triangle, CentersOfMassAtOrigin) {
  for (double theta : {0.0, 0.3, 1.9, -2.2}) {
    const ProblemInstance t = make_equilateral_triangle(2.0, theta);
    Vec3 cx = Vec3::Zero(), cy = Vec3::Zero();
    for (std::size_t i = 0; i < 3; ++i) {
      cx += t.model_points[i];
      cy += t.scene_points[i];
      EXPECT_NEAR(t.model_points[i].norm(), 2.0, 1e-14);
      EXPECT_EQ(t.model_points[i].z(), 0.0);
    }
    EXPECT_LE(cx.norm(), 1e-14);
    EXPECT_LE(cy.norm(), 1e-14);
  }
}

TEST(Triangle, PerPointTorquesPairOff) {
  const double l = 1.0;
  const double k = 2.0;
  for (double theta : {0.1, 0.5, kPi / 3}) {
    const ProblemInstance t = make_equilateral_triangle(l, theta);
    const double m = k * l * l * std::sin(theta + kPi / 3);
    EXPECT_NEAR(point_torque(t, 0).norm() + point_torque(t, 2).norm(), m, 1e-12);
    EXPECT_NEAR(point_torque(t, 1).norm(), m, 1e-12);
    EXPECT_LE((point_torque(t, 0) + point_torque(t, 1) + point_torque(t, 2)).norm(),
              1e-12 * k * l * l);
  }
}

TEST(Triangle, ResidualVanishesForAllTheta) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    const double l = 1.3;
    const ProblemInstance t = make_equilateral_triangle(l, u(rng));
    EXPECT_LE(symmetry_torque_residual(t), 1e-12 * 2.0 * l * l);
  }
}

TEST(Square, ResidualVanishes) {
  for (double theta : {0.0, kPi / 4}) {
    EXPECT_LE(symmetry_torque_residual(make_square(1.0, theta)), 1e-12 * 2.0);
  }
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    EXPECT_LE(symmetry_torque_residual(make_square(0.7, u(rng))), 1e-12 * 2.0 * 0.49);
  }
}

TEST(Symmetry, SigmaScalesTheSprings) {
  const ProblemInstance t = make_equilateral_triangle(1.0, 0.7, 0.5);
  for (double s : t.sigmas) EXPECT_EQ(s, 0.5);
  EXPECT_LE(symmetry_torque_residual(t), 1e-12 * 8.0);
}

TEST(Symmetry, PerturbedVertexBreaksCancellation) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  int broken = 0;
  for (int i = 0; i < 100; ++i) {
    ProblemInstance t = make_equilateral_triangle(1.0, u(rng));
    t.model_points[0] += 0.1 * Vec3(std::cos(0.7), std::sin(0.7), 0.0);
    if (symmetry_torque_residual(t) > 1e-3 * 2.0) ++broken;
  }
  EXPECT_GE(broken, 95);
}

TEST(Symmetry, AlignedStateHasNoNetForce) {
  const ProblemInstance t = make_square(1.0, 0.9);
  const BodyModel m = build_body_model(t, 1.0);
  State s;
  s.com_position = m.model_centroid_initial();
  EXPECT_LE(total_force(m, s).norm(), 1e-12);
}

}  // namespace
}  // namespace dynreg
