#include "dynreg/equilibria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "dynreg/horn.hpp"

namespace dynreg {

State EquilibriumCertificate::state() const {
  State s;
  s.rotation = rotation.matrix();
  return s;
}

double torque_residual(const BodyModel& model, const Mat3& rotation) {
  const auto scene = model.scene_centered();
  const auto offsets = model.model_offsets();
  const auto k = model.spring_constants();
  const Mat3 rt = rotation.transpose();
  Vec3 tau = Vec3::Zero();
  for (std::size_t i = 0; i < model.size(); ++i) {
    tau += k[i] * offsets[i].cross(rt * scene[i]);
  }
  return tau.norm();
}

double torque_scale(const BodyModel& model) {
  const auto scene = model.scene_centered();
  const auto offsets = model.model_offsets();
  const auto k = model.spring_constants();
  double s = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    s += k[i] * offsets[i].norm() * scene[i].norm();
  }
  return s;
}

ProblemInstance centered_instance(const BodyModel& model) {
  ProblemInstance inst;
  const auto offsets = model.model_offsets();
  const auto scene = model.scene_centered();
  const auto masses = model.masses();
  inst.model_points.assign(offsets.begin(), offsets.end());
  inst.scene_points.assign(scene.begin(), scene.end());
  inst.sigmas.resize(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    inst.sigmas[i] = 1.0 / std::sqrt(masses[i]);
  }
  return inst;
}

double default_jacobian_epsilon(const State& state) {
  return 1e-6 * (1.0 + state.flatten().lpNorm<Eigen::Infinity>());
}

Jacobian jacobian(const BodyModel& model, const State& state, double epsilon) {
  const StateVector s = state.flatten();
  const double h = epsilon > 0.0 ? epsilon : default_jacobian_epsilon(state);
  Jacobian a;
  for (int j = 0; j < 18; ++j) {
    StateVector plus = s;
    StateVector minus = s;
    plus(j) += h;
    minus(j) -= h;
    a.col(j) = (state_derivative(model, plus) - state_derivative(model, minus)) /
               (2.0 * h);
  }
  return a;
}

int classify_stability(const Spectrum& eigenvalues, double relative_threshold) {
  double radius = 0.0;
  for (const auto& l : eigenvalues) radius = std::max(radius, std::abs(l));
  const double threshold = relative_threshold * radius;
  return static_cast<int>(std::count_if(
      eigenvalues.begin(), eigenvalues.end(),
      [threshold](const std::complex<double>& l) { return l.real() > threshold; }));
}

EquilibriumCertificate certify(const BodyModel& model, const Mat3& rotation,
                               const Rotation& reference,
                               const EquilibriumOptions& options) {
  EquilibriumCertificate cert;
  cert.rotation = Rotation::from_matrix(rotation);
  cert.torque_residual = torque_residual(model, rotation);
  cert.relative_torque_residual = cert.torque_residual / torque_scale(model);
  cert.jacobian = jacobian(model, cert.state(), options.jacobian_epsilon);
  Eigen::EigenSolver<Jacobian> solver(cert.jacobian, false);
  if (solver.info() != Eigen::Success) {
    throw Error("eigenvalue computation did not converge");
  }
  cert.eigenvalues = solver.eigenvalues();
  cert.unstable_count =
      classify_stability(cert.eigenvalues, options.instability_threshold);
  cert.rotation_error_vs_horn =
      rotation_geodesic_error(cert.rotation, reference);
  return cert;
}

std::vector<EquilibriumCertificate> enumerate_equilibria(
    const BodyModel& model, const EquilibriumOptions& options) {
  const auto scene = model.scene_centered();
  const auto offsets = model.model_offsets();
  const auto k = model.spring_constants();
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < model.size(); ++i) {
    h += k[i] * scene[i] * offsets[i].transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  const double tol = options.spectrum_tolerance * sv(0);
  if (sv(2) <= tol || sv(0) - sv(1) <= tol || sv(1) - sv(2) <= tol) {
    throw DegenerateSpectrum(
        "cross-covariance has repeated or zero singular values; the cloud is "
        "symmetric and its equilibria form a continuum");
  }
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  const double parity = u.determinant() * v.determinant() < 0.0 ? -1.0 : 1.0;

  const Rotation reference = horn_solve(centered_instance(model)).rotation;
  const double limit = options.residual_tolerance * torque_scale(model);

  // s1 s2 s3 = det(U) det(V); the first two signs are free.
  static constexpr std::array<std::array<double, 2>, 4> kSigns{
      {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}};
  std::vector<EquilibriumCertificate> out;
  for (const auto& s : kSigns) {
    const Vec3 d(s[0], s[1], parity * s[0] * s[1]);
    const Mat3 r = u * d.asDiagonal() * v.transpose();
    if (torque_residual(model, r) > limit) continue;
    out.push_back(certify(model, r, reference, options));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EquilibriumCertificate& a,
                      const EquilibriumCertificate& b) {
                     return a.unstable_count < b.unstable_count;
                   });
  return out;
}

Trajectory escape_and_resimulate(const BodyModel& model,
                                 const EquilibriumCertificate& cert,
                                 const SimConfig& config, std::uint64_t seed) {
  State start = cert.state();
  if (config.perturbation_scale > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::Matrix<double, 6, 1> kick;
    for (int i = 0; i < 6; ++i) kick(i) = normal(rng);
    kick *= config.perturbation_scale / kick.norm();
    start.com_velocity = kick.head<3>();
    start.angular_velocity = kick.tail<3>();
  }
  Trajectory traj = simulate(model, start, config);
  if (cert.unstable_count >= 1 && config.perturbation_scale > 0.0 &&
      rotation_geodesic_error(traj.final_state.rotation,
                              cert.rotation.matrix()) < 1e-3) {
    throw Error("simulation did not leave the unstable equilibrium");
  }
  return traj;
}

}  // namespace dynreg
