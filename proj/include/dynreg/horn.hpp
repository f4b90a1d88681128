#pragma once

#include "dynreg/core.hpp"

namespace dynreg {

// Closed-form global minimizer of sum (1/sigma_i^2) ||y_i - R x_i - t||^2.
// Weighted centroids, weighted cross-covariance, SVD with a determinant flip
// on the smallest singular direction. Throws DegenerateCloud if the model is
// collinear.
Pose horn_solve(const ProblemInstance& instance);

// sum (1/sigma_i^2) ||y_i - R x_i - t||^2 in the instance's own frame.
double objective_value(const ProblemInstance& instance, const Pose& pose);

}  // namespace dynreg
