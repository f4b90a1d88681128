#include "dynreg/horn.hpp"

namespace dynreg {

Pose horn_solve(const ProblemInstance& instance) {
  instance.validate();
  const std::size_t n = instance.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / (instance.sigmas[i] * instance.sigmas[i]);
  }
  const Vec3 xbar = weighted_centroid(instance.model_points, w);
  const Vec3 ybar = weighted_centroid(instance.scene_points, w);

  std::vector<Vec3> centered(n);
  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    centered[i] = instance.model_points[i] - xbar;
    cov += w[i] * (instance.scene_points[i] - ybar) * centered[i].transpose();
  }
  require_noncollinear(centered);

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  const Vec3 d(1.0, 1.0, (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0);

  Pose pose;
  pose.rotation = Rotation::from_matrix(u * d.asDiagonal() * v.transpose());
  pose.translation = ybar - pose.rotation * xbar;
  return pose;
}

double objective_value(const ProblemInstance& instance, const Pose& pose) {
  double total = 0.0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Vec3 r = instance.scene_points[i] - pose.apply(instance.model_points[i]);
    total += r.squaredNorm() / (instance.sigmas[i] * instance.sigmas[i]);
  }
  return total;
}

}  // namespace dynreg
