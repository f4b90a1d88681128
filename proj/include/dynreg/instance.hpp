#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "dynreg/core.hpp"
#include "dynreg/dynamics.hpp"

namespace dynreg {

inline constexpr std::uint64_t kDefaultSeed = 20200917;

struct MonteCarloConfig {
  std::size_t runs = 50;
  std::size_t n_points = 20;
  double sigma = 0.01;  // noise standard deviation and per-point sigma_i
  std::uint64_t seed = kDefaultSeed;
  double mu = 1.0;
  SimConfig sim;

  void validate() const;
};

struct GeneratedInstance {
  ProblemInstance instance;
  Pose ground_truth;  // in the shifted frame where the scene is centered
};

using Rng = std::mt19937_64;

// Independent stream per (seed, run_index); serial and parallel sweeps see
// the same numbers.
Rng make_run_rng(std::uint64_t seed, std::size_t run_index);

// Haar-uniform rotation from a normalized 4D Gaussian (unit quaternion).
Rotation random_rotation(Rng& rng);

/// x_i ~ N(0, I), R Haar, t ~ N(0, I), y_i = R x_i + t + eps_i with
/// eps_i ~ N(0, sigma^2 I); both clouds are then shifted by the scene
/// centroid, so the truth becomes (R, t + R ybar - ybar). With sigma == 0 the
/// data is noise-free and every sigma_i is set to 1.
GeneratedInstance generate_instance(const MonteCarloConfig& config,
                                    std::size_t run_index);

}  // namespace dynreg
