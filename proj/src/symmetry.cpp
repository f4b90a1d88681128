#include "dynreg/symmetry.hpp"

#include <cmath>
#include <numbers>

#include "dynreg/dynamics.hpp"

namespace dynreg {
namespace {

ProblemInstance make_flipped_polygon(int sides, double l, double theta,
                                     double sigma) {
  if (!(l > 0.0) || !std::isfinite(theta)) {
    throw InvalidArgument("polygon needs l > 0 and finite theta");
  }
  const double pi = std::numbers::pi;
  const Mat3 rot = Rotation::axis_angle(Vec3::UnitZ(), theta).matrix();
  // Reflection about the line through the origin at angle pi/2 + theta,
  // i.e. through the rotated first vertex.
  const double a = 2.0 * (pi / 2.0 + theta);
  Mat3 flip;
  flip << std::cos(a), std::sin(a), 0.0,
          std::sin(a), -std::cos(a), 0.0,
          0.0, 0.0, 1.0;

  ProblemInstance inst;
  for (int j = 0; j < sides; ++j) {
    const double phi = pi / 2.0 - 2.0 * pi * j / sides;
    const Vec3 y(l * std::cos(phi), l * std::sin(phi), 0.0);
    inst.scene_points.push_back(y);
    inst.model_points.push_back(flip * (rot * y));
    inst.sigmas.push_back(sigma);
  }
  return inst;
}

}  // namespace

ProblemInstance make_equilateral_triangle(double l, double theta,
                                          double sigma) {
  return make_flipped_polygon(3, l, theta, sigma);
}

ProblemInstance make_square(double l, double theta, double sigma) {
  return make_flipped_polygon(4, l, theta, sigma);
}

double symmetry_torque_residual(const ProblemInstance& instance) {
  const BodyModel model = build_body_model(instance, 1.0);
  State aligned;
  aligned.com_position = Vec3::Zero();
  return total_torque(model, aligned).norm();
}

}  // namespace dynreg
