#pragma once

#include "dynreg/core.hpp"

namespace dynreg {

// Planar (z = 0) symmetric configurations whose torques cancel for every
// theta. The scene is a regular polygon with circumradius l, vertex 1 on the
// +y axis and vertices numbered clockwise. The model is the scene rotated
// counter-clockwise by theta and then reflected about the line through
// (rotated) vertex 1 and the center. All sigmas equal `sigma`.
ProblemInstance make_equilateral_triangle(double l, double theta,
                                          double sigma = 1.0);
ProblemInstance make_square(double l, double theta, double sigma = 1.0);

// ||total_torque|| at the static state with both centers of mass aligned
// and R = I.
double symmetry_torque_residual(const ProblemInstance& instance);

}  // namespace dynreg
