#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "dynreg/core.hpp"
#include "dynreg/dynamics.hpp"

namespace dynreg {

using Jacobian = Eigen::Matrix<double, 18, 18>;
using Spectrum = Eigen::Matrix<std::complex<double>, 18, 1>;

struct EquilibriumOptions {
  // Certification: ||sum k_i hat(xt_i) R^T y_i|| <= tol * sum k_i |xt_i| |y_i|.
  double residual_tolerance = 1e-6;
  // Re(lambda) > threshold * spectral radius counts as unstable.
  double instability_threshold = 1e-6;
  // Relative gap below which singular values are treated as repeated/zero.
  double spectrum_tolerance = 1e-9;
  // <= 0 selects 1e-6 * (1 + ||s||_inf).
  double jacobian_epsilon = 0.0;
};

/// An equilibrium (xbar^Y = 0, zero velocities) with its linearization.
///
/// unstable_count == 0 means no instability certificate was found. It is
/// not a proof of stability: the 9-coordinate rotation embedding adds
/// constraint directions with zero eigenvalues.
struct EquilibriumCertificate {
  Rotation rotation;
  double torque_residual = 0.0;           // absolute
  double relative_torque_residual = 0.0;  // over the natural torque scale
  Jacobian jacobian = Jacobian::Zero();
  Spectrum eigenvalues = Spectrum::Zero();
  int unstable_count = 0;
  double rotation_error_vs_horn = 0.0;

  State state() const;
};

// ||sum k_i hat(xt_i) R^T y_i|| with centered scene points.
double torque_residual(const BodyModel& model, const Mat3& rotation);
// sum k_i |xt_i| |y_i|
double torque_scale(const BodyModel& model);

// Rebuilds the centered problem (xt_i, y_i, sigma_i) so that horn_solve can
// be run as an independent reference for a model.
ProblemInstance centered_instance(const BodyModel& model);

/// Central finite-difference Jacobian of state_derivative on the flattened
/// 18-dimensional embedding. The rotation block is perturbed entrywise
/// without re-projection.
Jacobian jacobian(const BodyModel& model, const State& state,
                  double epsilon = 0.0);
double default_jacobian_epsilon(const State& state);

int classify_stability(const Spectrum& eigenvalues,
                       double relative_threshold = 1e-6);

// Computes residual, Jacobian, spectrum and classification at the static
// state (0, R, 0, 0). `reference` is the globally optimal rotation.
EquilibriumCertificate certify(const BodyModel& model, const Mat3& rotation,
                               const Rotation& reference,
                               const EquilibriumOptions& options = {});

/// All equilibria of a generic model, sorted by unstable_count.
///
/// Candidates are U D V^T from the SVD of H = sum k_i y_i xt_i^T with the
/// four sign patterns D whose determinant makes the product proper. Only
/// candidates passing the torque certification are returned. Throws
/// DegenerateSpectrum when H has repeated or zero singular values.
std::vector<EquilibriumCertificate> enumerate_equilibria(
    const BodyModel& model, const EquilibriumOptions& options = {});

/// Starts at the certificate's equilibrium with a random velocity kick of
/// norm config.perturbation_scale and simulates. Throws Error if the
/// equilibrium carries an instability certificate, the kick is nonzero, and
/// the run still ends within 1e-3 rad of the starting rotation.
Trajectory escape_and_resimulate(const BodyModel& model,
                                 const EquilibriumCertificate& cert,
                                 const SimConfig& config,
                                 std::uint64_t seed = 0);

}  // namespace dynreg
