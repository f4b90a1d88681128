#include "dynreg/dynamics.hpp"

#include <cmath>
#include <string>

namespace dynreg {

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("dt must be positive");
  }
  if (!(stop_threshold > 0.0)) {
    throw InvalidArgument("stop threshold must be positive");
  }
  if (max_steps == 0 || record_every == 0) {
    throw InvalidArgument("max_steps and record_every must be positive");
  }
  if (!(perturbation_scale >= 0.0)) {
    throw InvalidArgument("perturbation scale must be nonnegative");
  }
  if (dt * static_cast<double>(max_steps) > 1e7) {
    throw InvalidArgument("dt * max_steps exceeds 1e7 simulated seconds");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxSteps: return "MaxSteps";
    case Termination::Stalled: return "Stalled";
  }
  return "Unknown";
}

Vec3 total_force(const BodyModel& model, const State& state,
                 std::span<const double> springs) {
  const auto scene = model.scene_centered();
  const auto offsets = model.model_offsets();
  Vec3 f = Vec3::Zero();
  for (std::size_t i = 0; i < model.size(); ++i) {
    f += springs[i] *
         (scene[i] - state.rotation * offsets[i] - state.com_position);
  }
  return f - model.damping() * model.total_mass() * state.com_velocity;
}

Vec3 total_force(const BodyModel& model, const State& state) {
  return total_force(model, state, model.spring_constants());
}

Vec3 total_torque(const BodyModel& model, const State& state,
                  std::span<const double> springs) {
  const auto scene = model.scene_centered();
  const auto offsets = model.model_offsets();
  const Mat3 rt = state.rotation.transpose();
  Vec3 tau = Vec3::Zero();
  for (std::size_t i = 0; i < model.size(); ++i) {
    tau += springs[i] * offsets[i].cross(rt * (scene[i] - state.com_position));
  }
  // sum mu m_i hat(xt_i) hat(w) xt_i == -mu J w
  return tau - model.damping() * (model.inertia() * state.angular_velocity);
}

Vec3 total_torque(const BodyModel& model, const State& state) {
  return total_torque(model, state, model.spring_constants());
}

StateVector state_derivative(const BodyModel& model, const State& state,
                             std::span<const double> springs) {
  const Vec3& w = state.angular_velocity;
  const Vec3 force = total_force(model, state, springs);
  const Vec3 torque = total_torque(model, state, springs);
  const Mat3 rdot = state.rotation * hat(w);

  StateVector ds;
  ds.segment<3>(0) = state.com_velocity;
  ds.segment<9>(3) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(rdot.data());
  ds.segment<3>(12) = force / model.total_mass();
  ds.segment<3>(15) =
      model.inertia_inverse() * (torque - w.cross(model.inertia() * w));
  return ds;
}

StateVector state_derivative(const BodyModel& model, const State& state) {
  return state_derivative(model, state, model.spring_constants());
}

StateVector state_derivative(const BodyModel& model, const StateVector& s) {
  return state_derivative(model, State::unflatten(s));
}

double potential_energy(const BodyModel& model, const State& state) {
  const auto scene = model.scene_centered();
  const auto offsets = model.model_offsets();
  const auto k = model.spring_constants();
  double vp = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    vp += 0.5 * k[i] *
          (scene[i] - state.rotation * offsets[i] - state.com_position)
              .squaredNorm();
  }
  return vp;
}

double kinetic_energy(const BodyModel& model, const State& state) {
  const Vec3& w = state.angular_velocity;
  return 0.5 * model.total_mass() * state.com_velocity.squaredNorm() +
         0.5 * w.dot(model.inertia() * w);
}

double energy_rate(const BodyModel& model, const State& state) {
  const Vec3& w = state.angular_velocity;
  return -model.damping() *
         (model.total_mass() * state.com_velocity.squaredNorm() +
          w.dot(model.inertia() * w));
}

EnergyReport energies(const BodyModel& model, const State& state) {
  EnergyReport e;
  e.kinetic = kinetic_energy(model, state);
  e.potential = potential_energy(model, state);
  e.total = e.kinetic + e.potential;
  e.rate = energy_rate(model, state);
  return e;
}

State euler_advance(const State& state, const StateVector& derivative,
                    double dt) {
  const StateVector s = state.flatten() + dt * derivative;
  if (!s.allFinite()) {
    throw NonFiniteState("state became non-finite; reduce dt");
  }
  State next = State::unflatten(s);
  try {
    next.rotation = project_so3(next.rotation).matrix();
  } catch (const SingularInput&) {
    // A finite but exploding spin flattens R + dt R hat(w) to rank one.
    throw NonFiniteState("rotation block degenerated; reduce dt");
  }
  return next;
}

State step(const BodyModel& model, const State& state, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  return euler_advance(state, state_derivative(model, state), dt);
}

State initial_state(const BodyModel& model) {
  State s;
  s.com_position = model.model_centroid_initial();
  return s;
}

Trajectory integrate(const BodyModel& model, const State& initial,
                     const SimConfig& config, const SpringLaw& law,
                     bool detect_stall) {
  config.validate();
  Trajectory traj;
  SpringEvaluation springs;
  State state = initial;

  for (std::size_t k = 0;; ++k) {
    law(state, springs);
    const StateVector ds = state_derivative(model, state, springs.coefficients);
    if (!ds.allFinite() || !state.flatten().allFinite()) {
      throw NonFiniteState("state became non-finite at step " +
                           std::to_string(k) + "; reduce dt");
    }
    const double rate_norm = ds.norm();

    bool done = true;
    if (detect_stall && springs.active == 0 &&
        state.com_velocity.norm() < config.stop_threshold &&
        state.angular_velocity.norm() < config.stop_threshold) {
      traj.termination = Termination::Stalled;
    } else if (rate_norm < config.stop_threshold) {
      traj.termination = Termination::Converged;
    } else if (k == config.max_steps) {
      traj.termination = Termination::MaxSteps;
    } else {
      done = false;
    }

    if (done || k % config.record_every == 0) {
      TrajectorySample sample;
      sample.step = k;
      sample.time = static_cast<double>(k) * config.dt;
      sample.state = state;
      sample.energy.kinetic = kinetic_energy(model, state);
      sample.energy.potential = springs.potential;
      sample.energy.total = sample.energy.kinetic + sample.energy.potential;
      sample.energy.rate = energy_rate(model, state);
      sample.active_springs = springs.active;
      traj.samples.push_back(sample);
    }
    if (done) {
      traj.steps = k;
      traj.final_state = state;
      traj.final_derivative_norm = rate_norm;
      return traj;
    }
    state = euler_advance(state, ds, config.dt);
  }
}

Trajectory simulate(const BodyModel& model, const State& initial,
                    const SimConfig& config) {
  const auto k = model.spring_constants();
  const SpringLaw quadratic = [&model, k](const State& s, SpringEvaluation& out) {
    out.coefficients.assign(k.begin(), k.end());
    out.potential = potential_energy(model, s);
    out.active = k.size();
  };
  return integrate(model, initial, config, quadratic, false);
}

}  // namespace dynreg
