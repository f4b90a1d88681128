#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dynreg/core.hpp"

namespace dynreg {

struct EnergyReport {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double rate = 0.0;  // analytic dV/dt, never positive
};

struct SimConfig {
  double dt = 0.01;
  double stop_threshold = 1e-4;  // on ||ds/dt||, the full 18-vector
  std::size_t max_steps = 200000;
  double perturbation_scale = 0.0;
  std::size_t record_every = 10;

  // Throws InvalidArgument on non-positive dt/threshold, zero counts or a
  // simulated horizon dt * max_steps above 1e7 seconds.
  void validate() const;
};

enum class Termination { Converged, MaxSteps, Stalled };

std::string_view to_string(Termination t);

struct TrajectorySample {
  std::size_t step = 0;
  double time = 0.0;
  State state;
  EnergyReport energy;
  std::size_t active_springs = 0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Termination termination = Termination::MaxSteps;
  std::size_t steps = 0;  // integration steps actually taken
  State final_state;
  double final_derivative_norm = 0.0;
};

// Spring-only and damping terms of the total force in frame Y:
//   sum k_i (y_i - R xt_i - xbar^Y) - mu M vbar^Y.
Vec3 total_force(const BodyModel& model, const State& state);
Vec3 total_force(const BodyModel& model, const State& state,
                 std::span<const double> springs);

// Total torque about the center of mass in frame X:
//   sum k_i hat(xt_i) R^T (y_i - xbar^Y) - mu J omega.
Vec3 total_torque(const BodyModel& model, const State& state);
Vec3 total_torque(const BodyModel& model, const State& state,
                  std::span<const double> springs);

/// Newton-Euler right-hand side ds/dt = F(s) in the flattened layout of
/// State::flatten. The rotation block is treated as nine free coordinates,
/// so F is defined (and smooth) off SO(3) too.
StateVector state_derivative(const BodyModel& model, const State& state);
StateVector state_derivative(const BodyModel& model, const State& state,
                             std::span<const double> springs);
StateVector state_derivative(const BodyModel& model, const StateVector& s);

EnergyReport energies(const BodyModel& model, const State& state);

// Analytic dissipation rate -mu M |v|^2 - mu w^T J w.
double energy_rate(const BodyModel& model, const State& state);

// Sum (k_i / 2) |y_i - R xt_i - xbar^Y|^2.
double potential_energy(const BodyModel& model, const State& state);
double kinetic_energy(const BodyModel& model, const State& state);

// One explicit Euler step followed by projection of R onto SO(3).
State step(const BodyModel& model, const State& state, double dt);
State euler_advance(const State& state, const StateVector& derivative,
                    double dt);

// At rest: xbar^Y = xbar, R = I, zero velocities.
State initial_state(const BodyModel& model);

Trajectory simulate(const BodyModel& model, const State& initial,
                    const SimConfig& config);

/// Spring coefficients and potential energy at a state. The quadratic model
/// returns the fixed constants; the saturated model switches springs off.
struct SpringEvaluation {
  std::vector<double> coefficients;
  double potential = 0.0;
  std::size_t active = 0;
};
using SpringLaw = std::function<void(const State&, SpringEvaluation&)>;

// Shared integration loop. With `detect_stall`, a state with no active
// spring and velocities below the stop threshold ends the run as Stalled.
Trajectory integrate(const BodyModel& model, const State& initial,
                     const SimConfig& config, const SpringLaw& law,
                     bool detect_stall);

}  // namespace dynreg
