#include "dynreg/robust.hpp"

#include <algorithm>
#include <cmath>

namespace dynreg {

RobustSpringModel::RobustSpringModel(BodyModel base, double cbar,
                                     std::vector<double> betas)
    : base_(std::move(base)), betas_(std::move(betas)), cbar_(cbar) {
  if (!(cbar_ > 0.0)) throw InvalidArgument("cbar must be positive");
  if (betas_.empty()) {
    const auto m = base_.masses();
    betas_.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) betas_[i] = 1.0 / std::sqrt(m[i]);
  }
  if (betas_.size() != base_.size()) {
    throw InvalidArgument("one beta per correspondence required");
  }
  for (double b : betas_) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw InvalidArgument("beta must be positive and finite");
    }
  }
}

double active_spring_coefficient(const RobustSpringModel& model,
                                 double residual_sq, std::size_t i) {
  const double beta_sq = model.betas()[i] * model.betas()[i];
  return residual_sq <= model.cbar() * model.cbar() * beta_sq ? 2.0 / beta_sq
                                                              : 0.0;
}

SpringEvaluation evaluate_springs(const RobustSpringModel& model,
                                  const State& state) {
  const BodyModel& base = model.base();
  const auto scene = base.scene_centered();
  const auto offsets = base.model_offsets();
  const double cap = model.cbar() * model.cbar();

  SpringEvaluation out;
  out.coefficients.resize(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double r2 =
        (scene[i] - state.rotation * offsets[i] - state.com_position)
            .squaredNorm();
    const double beta_sq = model.betas()[i] * model.betas()[i];
    out.coefficients[i] = active_spring_coefficient(model, r2, i);
    out.potential += std::min(r2 / beta_sq, cap);
    if (out.coefficients[i] > 0.0) ++out.active;
  }
  return out;
}

double robust_potential(const RobustSpringModel& model, const State& state) {
  return evaluate_springs(model, state).potential;
}

std::pair<Vec3, Vec3> robust_force_torque(const RobustSpringModel& model,
                                          const State& state) {
  const SpringEvaluation springs = evaluate_springs(model, state);
  return {total_force(model.base(), state, springs.coefficients),
          total_torque(model.base(), state, springs.coefficients)};
}

Trajectory robust_simulate(const RobustSpringModel& model, const State& initial,
                           const SimConfig& config) {
  const SpringLaw saturated = [&model](const State& s, SpringEvaluation& out) {
    out = evaluate_springs(model, s);
  };
  return integrate(model.base(), initial, config, saturated, true);
}

}  // namespace dynreg
