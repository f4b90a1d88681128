#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dynreg/core.hpp"
#include "dynreg/dynamics.hpp"

namespace dynreg {

/// Truncated-least-squares springs: spring i carries 2/beta_i^2 while its
/// squared stretch is at most cbar^2 beta_i^2 and is cut otherwise. Masses,
/// inertia and damping come from the base model; damping acts on every
/// particle whether or not its spring is engaged.
class RobustSpringModel {
 public:
  // Empty `betas` selects beta_i = sigma_i = 1/sqrt(m_i).
  RobustSpringModel(BodyModel base, double cbar, std::vector<double> betas = {});

  const BodyModel& base() const { return base_; }
  std::span<const double> betas() const { return betas_; }
  double cbar() const { return cbar_; }

 private:
  BodyModel base_;
  std::vector<double> betas_;
  double cbar_;
};

// Two-branch coefficient; the boundary residual_sq == cbar^2 beta_i^2 is active.
double active_spring_coefficient(const RobustSpringModel& model,
                                 double residual_sq, std::size_t i);

// sum min(|r_i|^2 / beta_i^2, cbar^2). Kinetic energy excluded.
double robust_potential(const RobustSpringModel& model, const State& state);

// Coefficients of every spring at `state` plus the saturated potential.
SpringEvaluation evaluate_springs(const RobustSpringModel& model,
                                  const State& state);

// (force in Y, torque in X) with only the engaged springs.
std::pair<Vec3, Vec3> robust_force_torque(const RobustSpringModel& model,
                                          const State& state);

// Same protocol as simulate(); samples carry robust_potential as the
// potential and the number of engaged springs. Ends as Stalled when no
// spring is engaged and both velocities are below the stop threshold.
Trajectory robust_simulate(const RobustSpringModel& model, const State& initial,
                           const SimConfig& config);

}  // namespace dynreg
