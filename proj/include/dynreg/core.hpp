#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dynreg/errors.hpp"

namespace dynreg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Point3 = Eigen::Vector3d;

// Skew-symmetric matrix with hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

// True when ||M^T M - I||_F <= tol and |det(M) - 1| <= tol.
bool is_rotation(const Mat3& m, double tol = 1e-9);

/// A validated element of SO(3).
class Rotation {
 public:
  Rotation() : matrix_(Mat3::Identity()) {}

  /// Throws InvalidArgument if `m` is not a rotation to 1e-9.
  static Rotation from_matrix(const Mat3& m);
  static Rotation identity() { return Rotation(); }
  /// Right-handed rotation by `angle` radians about `axis` (normalized here).
  static Rotation axis_angle(const Vec3& axis, double angle);

  const Mat3& matrix() const { return matrix_; }
  Vec3 operator*(const Vec3& v) const { return matrix_ * v; }
  Rotation operator*(const Rotation& other) const {
    return Rotation(matrix_ * other.matrix_);
  }
  Rotation transpose() const { return Rotation(matrix_.transpose()); }

 private:
  explicit Rotation(const Mat3& m) : matrix_(m) {}
  Mat3 matrix_;
};

// Rigid transform taking model coordinates to scene coordinates.
struct Pose {
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
};

/// Two clouds with index correspondence and per-correspondence noise scale.
struct ProblemInstance {
  std::vector<Point3> model_points;  // x_i
  std::vector<Point3> scene_points;  // y_i
  std::vector<double> sigmas;        // sigma_i > 0

  std::size_t size() const { return model_points.size(); }

  /// Checks lengths, N >= 3, finiteness and sigma > 0. Does not run the
  /// rank test; build_body_model and horn_solve do that.
  void validate() const;
};

/// Immutable physical description of the moving cloud and its springs.
///
/// Both clouds are shifted by the mass-weighted scene centroid so the fixed
/// frame Y sits at the scene center of mass. Masses are 1/sigma^2 and spring
/// constants 2/sigma^2.
class BodyModel {
 public:
  std::size_t size() const { return masses_.size(); }
  std::span<const double> masses() const { return masses_; }
  std::span<const double> spring_constants() const { return springs_; }
  double total_mass() const { return total_mass_; }
  // y_i - ybar
  std::span<const Vec3> scene_centered() const { return scene_; }
  // x_i - ybar - xbar, constant in the body frame
  std::span<const Vec3> model_offsets() const { return offsets_; }
  // Model center of mass in frame Y at t = 0.
  const Vec3& model_centroid_initial() const { return model_centroid_; }
  const Mat3& inertia() const { return inertia_; }
  const Mat3& inertia_inverse() const { return inertia_inv_; }
  double damping() const { return damping_; }
  const Vec3& scene_shift() const { return scene_shift_; }
  // Mass-weighted radius of gyration of the model about its center of mass.
  double scale() const { return scale_; }

 private:
  friend BodyModel build_body_model(const ProblemInstance&, double);
  BodyModel() = default;

  std::vector<double> masses_;
  std::vector<double> springs_;
  double total_mass_ = 0.0;
  std::vector<Vec3> scene_;
  std::vector<Vec3> offsets_;
  Vec3 model_centroid_ = Vec3::Zero();
  Mat3 inertia_ = Mat3::Zero();
  Mat3 inertia_inv_ = Mat3::Zero();
  double damping_ = 1.0;
  Vec3 scene_shift_ = Vec3::Zero();
  double scale_ = 0.0;
};

// Throws NonPositiveSigma, DegenerateCloud or InvalidArgument.
BodyModel build_body_model(const ProblemInstance& instance, double mu);

// Singular-value rank test on the 3xN centered model matrix, threshold
// 1e-9 times the largest singular value. Throws DegenerateCloud below rank 2.
void require_noncollinear(std::span<const Vec3> centered);

using StateVector = Eigen::Matrix<double, 18, 1>;

/// Dynamical state of the moving cloud.
///
/// The rotation block is kept as a raw matrix: the integrator projects it
/// back to SO(3) every step, while the Jacobian perturbs it as nine free
/// coordinates. Flattened layout is
/// [com_position(0..2); vec(R) column-major (3..11); com_velocity (12..14);
///  angular_velocity (15..17)].
struct State {
  Vec3 com_position = Vec3::Zero();      // xbar^Y
  Mat3 rotation = Mat3::Identity();      // R = R_X^Y
  Vec3 com_velocity = Vec3::Zero();      // vbar^Y
  Vec3 angular_velocity = Vec3::Zero();  // omega^X, body frame

  StateVector flatten() const;
  static State unflatten(const StateVector& s);
};

// Nearest rotation in Frobenius norm: U diag(1, 1, det(U V^T)) V^T.
// Throws SingularInput if sigma_min < 1e-12 * sigma_max.
Rotation project_so3(const Mat3& m);

// Angle of R1^T R2 in [0, pi], i.e. acos((trace(R1^T R2) - 1) / 2).
double rotation_geodesic_error(const Rotation& r1, const Rotation& r2);
double rotation_geodesic_error(const Mat3& r1, const Mat3& r2);

// Pose in the caller's original (unshifted) frame.
Pose pose_from_state(const State& state, const BodyModel& model);

// Static state (zero velocities) placing the model at `pose`; inverse of
// pose_from_state.
State state_from_pose(const Pose& pose, const BodyModel& model);

// Mass-weighted centroid sum(m_i p_i) / sum(m_i).
Vec3 weighted_centroid(std::span<const Point3> points,
                       std::span<const double> weights);

}  // namespace dynreg
