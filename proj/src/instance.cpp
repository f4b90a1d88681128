#include "dynreg/instance.hpp"

#include <cmath>
#include <vector>

namespace dynreg {

void MonteCarloConfig::validate() const {
  if (runs < 1) throw InvalidArgument("runs must be >= 1");
  if (n_points < 3) throw InvalidArgument("n_points must be >= 3");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("sigma must be nonnegative");
  }
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  sim.validate();
}

Rng make_run_rng(std::uint64_t seed, std::size_t run_index) {
  const auto idx = static_cast<std::uint64_t>(run_index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx),
                    static_cast<std::uint32_t>(idx >> 32)};
  return Rng(seq);
}

Rotation random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Vector4d q;
  do {
    for (int i = 0; i < 4; ++i) q(i) = normal(rng);
  } while (q.norm() < 1e-12);
  q.normalize();
  const Eigen::Quaterniond quat(q(0), q(1), q(2), q(3));
  return project_so3(quat.toRotationMatrix());
}

GeneratedInstance generate_instance(const MonteCarloConfig& config,
                                    std::size_t run_index) {
  config.validate();
  Rng rng = make_run_rng(config.seed, run_index);
  std::normal_distribution<double> normal;
  const auto gaussian3 = [&]() {
    const double a = normal(rng);
    const double b = normal(rng);
    const double c = normal(rng);
    return Vec3(a, b, c);
  };

  const std::size_t n = config.n_points;
  std::vector<Vec3> x(n);
  for (auto& p : x) p = gaussian3();
  const Rotation r = random_rotation(rng);
  const Vec3 t = gaussian3();
  std::vector<Vec3> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = r * x[i] + t + config.sigma * gaussian3();
  }

  Vec3 ybar = Vec3::Zero();
  for (const auto& p : y) ybar += p;
  ybar /= static_cast<double>(n);

  GeneratedInstance out;
  out.instance.model_points.resize(n);
  out.instance.scene_points.resize(n);
  out.instance.sigmas.assign(n, config.sigma > 0.0 ? config.sigma : 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.instance.model_points[i] = x[i] - ybar;
    out.instance.scene_points[i] = y[i] - ybar;
  }
  out.ground_truth.rotation = r;
  out.ground_truth.translation = t + r * ybar - ybar;
  return out;
}

}  // namespace dynreg
