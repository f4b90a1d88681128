#include "dynreg/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dynreg {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

bool is_rotation(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  const double orth = (m.transpose() * m - Mat3::Identity()).norm();
  return orth <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!is_rotation(m)) {
    throw InvalidArgument("matrix is not in SO(3)");
  }
  return Rotation(m);
}

Rotation Rotation::axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(angle)) {
    throw InvalidArgument("axis_angle needs a nonzero finite axis");
  }
  return Rotation(Eigen::AngleAxisd(angle, axis / n).toRotationMatrix());
}

void ProblemInstance::validate() const {
  const std::size_t n = model_points.size();
  if (scene_points.size() != n || sigmas.size() != n) {
    throw InvalidArgument("model, scene and sigma lists differ in length");
  }
  if (n < 3) {
    throw InvalidArgument("need at least 3 correspondences, got " +
                          std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!model_points[i].allFinite() || !scene_points[i].allFinite()) {
      throw InvalidArgument("non-finite coordinate at index " +
                            std::to_string(i));
    }
    if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i])) {
      throw NonPositiveSigma("sigma must be positive and finite at index " +
                             std::to_string(i));
    }
  }
}

Vec3 weighted_centroid(std::span<const Point3> points,
                       std::span<const double> weights) {
  Vec3 sum = Vec3::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum += weights[i] * points[i];
    total += weights[i];
  }
  return sum / total;
}

void require_noncollinear(std::span<const Vec3> centered) {
  Eigen::Matrix3Xd cols(3, static_cast<Eigen::Index>(centered.size()));
  for (std::size_t i = 0; i < centered.size(); ++i) {
    cols.col(static_cast<Eigen::Index>(i)) = centered[i];
  }
  const Vec3 sv = Eigen::JacobiSVD<Eigen::Matrix3Xd>(cols).singularValues();
  if (!(sv(0) > 0.0) || sv(1) <= 1e-9 * sv(0)) {
    throw DegenerateCloud("model points are collinear (rank < 2)");
  }
}

BodyModel build_body_model(const ProblemInstance& instance, double mu) {
  instance.validate();
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("damping mu must be positive");
  }
  const std::size_t n = instance.size();

  BodyModel model;
  model.damping_ = mu;
  model.masses_.resize(n);
  model.springs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double inv_var = 1.0 / (instance.sigmas[i] * instance.sigmas[i]);
    model.masses_[i] = inv_var;
    model.springs_[i] = 2.0 * inv_var;
  }
  model.total_mass_ = 0.0;
  for (double m : model.masses_) model.total_mass_ += m;

  model.scene_shift_ = weighted_centroid(instance.scene_points, model.masses_);
  model.scene_.resize(n);
  std::vector<Vec3> shifted_model(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.scene_[i] = instance.scene_points[i] - model.scene_shift_;
    shifted_model[i] = instance.model_points[i] - model.scene_shift_;
  }
  model.model_centroid_ = weighted_centroid(shifted_model, model.masses_);
  model.offsets_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.offsets_[i] = shifted_model[i] - model.model_centroid_;
  }
  require_noncollinear(model.offsets_);

  Mat3 inertia = Mat3::Zero();
  double second_moment = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Mat3 h = hat(model.offsets_[i]);
    inertia -= model.masses_[i] * (h * h);
    second_moment += model.masses_[i] * model.offsets_[i].squaredNorm();
  }
  model.inertia_ = 0.5 * (inertia + inertia.transpose());
  Eigen::LLT<Mat3> llt(model.inertia_);
  if (llt.info() != Eigen::Success) {
    throw SingularInertia("inertia matrix is not positive definite");
  }
  model.inertia_inv_ = llt.solve(Mat3::Identity());
  model.scale_ = std::sqrt(second_moment / model.total_mass_);
  return model;
}

StateVector State::flatten() const {
  StateVector s;
  s.segment<3>(0) = com_position;
  s.segment<9>(3) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(rotation.data());
  s.segment<3>(12) = com_velocity;
  s.segment<3>(15) = angular_velocity;
  return s;
}

State State::unflatten(const StateVector& s) {
  State state;
  state.com_position = s.segment<3>(0);
  state.rotation = Eigen::Map<const Mat3>(s.data() + 3);
  state.com_velocity = s.segment<3>(12);
  state.angular_velocity = s.segment<3>(15);
  return state;
}

Rotation project_so3(const Mat3& m) {
  if (!m.allFinite()) {
    throw SingularInput("cannot project a non-finite matrix");
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(2) < 1e-12 * sv(0)) {
    throw SingularInput("matrix is too close to singular for SO(3) projection");
  }
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Vec3 d(1.0, 1.0, (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0);
  return Rotation::from_matrix(u * d.asDiagonal() * v.transpose());
}

double rotation_geodesic_error(const Mat3& r1, const Mat3& r2) {
  // atan2 of (sin, cos) keeps full precision near 0 and pi, where acos of
  // the trace alone bottoms out around 1e-8.
  const Mat3 rel = r1.transpose() * r2;
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  const Vec3 s(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
  return std::atan2(0.5 * s.norm(), c);
}

double rotation_geodesic_error(const Rotation& r1, const Rotation& r2) {
  return rotation_geodesic_error(r1.matrix(), r2.matrix());
}

Pose pose_from_state(const State& state, const BodyModel& model) {
  // In the shifted frame y' = R x' + (xbar^Y - R xbar). Undo the shift by
  // ybar on both clouds: t = t' + ybar - R ybar.
  Pose pose;
  pose.rotation = project_so3(state.rotation);
  const Mat3& r = pose.rotation.matrix();
  const Vec3 shifted_t =
      state.com_position - r * model.model_centroid_initial();
  pose.translation =
      shifted_t + model.scene_shift() - r * model.scene_shift();
  return pose;
}

State state_from_pose(const Pose& pose, const BodyModel& model) {
  State s;
  const Mat3& r = pose.rotation.matrix();
  s.rotation = r;
  const Vec3 shifted_t =
      pose.translation - model.scene_shift() + r * model.scene_shift();
  s.com_position = shifted_t + r * model.model_centroid_initial();
  return s;
}

}  // namespace dynreg
