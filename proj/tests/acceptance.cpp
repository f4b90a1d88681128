// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dynreg/dynamics.hpp"
#include "dynreg/equilibria.hpp"
#include "dynreg/horn.hpp"
#include "dynreg/instance.hpp"
#include "dynreg/robust.hpp"
#include "dynreg/study.hpp"
#include "dynreg/symmetry.hpp"
#include "oracles.hpp"

namespace {

using namespace dynreg;

constexpr double kPi = std::numbers::pi;
constexpr double kHalfDegree = 0.5 * kPi / 180.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

// Criteria 1-3 share one equilibria study.
struct EquilibriaData {
  StudyResult result;
  double seconds = 0.0;
};

EquilibriaData equilibria_data() {
  MonteCarloConfig mc;
  mc.runs = 50;
  const auto t0 = std::chrono::steady_clock::now();
  EquilibriaData d{run_equilibria_study(mc), 0.0};
  d.seconds = seconds_since(t0);
  return d;
}

Outcome equilibrium_count(const EquilibriaData& d) {
  std::size_t good = 0;
  for (const auto& r : d.result.records) good += r.equilibria == 4 ? 1 : 0;
  Outcome o;
  o.pass = d.result.records.size() == 50 && good == 50 && d.seconds < 30.0;
  o.detail = fmt("%.0f/50 runs with 4 certified equilibria, %.2f s", double(good), d.seconds);
  return o;
}

Outcome stability_classification(const EquilibriaData& d) {
  std::size_t good = 0;
  for (const auto& r : d.result.records) {
    std::vector<int> c = r.unstable_counts;
    std::sort(c.begin(), c.end());
    good += c == std::vector<int>{0, 1, 2, 3} ? 1 : 0;
  }
  return {good == 50, fmt("%.0f/50 runs with unstable counts {0,1,2,3}", double(good))};
}

Outcome spurious_rotations(const EquilibriaData& d) {
  double lo = kPi, hi = 0.0;
  std::size_t n = 0;
  bool pass = true;
  for (const auto& r : d.result.records) {
    for (std::size_t e = 0; e < r.errors_vs_horn.size(); ++e) {
      if (r.unstable_counts[e] == 0) continue;
      const double err = r.errors_vs_horn[e];
      lo = std::min(lo, err);
      hi = std::max(hi, err);
      ++n;
      if (!(err >= kPi - 1e-6 && err <= kPi)) pass = false;
    }
  }
  pass = pass && n == 150;
  return {pass, fmt("%.0f spurious equilibria, pi - error in [%.3g, %.3g]", double(n),
                    kPi - hi, kPi - lo)};
}

Outcome simulation_optimality() {
  MonteCarloConfig mc;
  mc.runs = 100;
  const auto t0 = std::chrono::steady_clock::now();
  const StudyResult res = run_simulation_study(mc);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  std::size_t maxed = 0, within = 0;
  for (const auto& r : res.records) {
    worst = std::max(worst, r.rotation_error);
    if (r.termination == Termination::MaxSteps) ++maxed;
    if (r.termination == Termination::Converged && r.rotation_error < kHalfDegree) ++within;
  }
  Outcome o;
  o.pass = res.records.size() == 100 && within == 100 && maxed == 0 && secs < 300.0;
  o.detail = fmt("%.0f/100 within 0.5 deg (worst %.3g rad), ", double(within), worst) +
             fmt("%.0f at max_steps, %.2f s", double(maxed), secs);
  return o;
}

// Largest |(V(t+dt) - V(t)) / dt - Vdot(t)| over a fixed horizon, and whether
// the analytic rate stayed nonpositive.
std::pair<double, bool> rate_discrepancy(const BodyModel& m, double dt) {
  SimConfig cfg;
  cfg.dt = dt;
  cfg.record_every = 1;
  cfg.stop_threshold = 1e-300;
  cfg.max_steps = static_cast<std::size_t>(std::lround(4.0 / dt));
  const Trajectory t = simulate(m, initial_state(m), cfg);
  double worst = 0.0;
  bool nonpositive = true;
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    if (t.samples[i].energy.rate > 0.0) nonpositive = false;
    if (i == 0) continue;
    const double discrete = (t.samples[i].energy.total - t.samples[i - 1].energy.total) / dt;
    worst = std::max(worst, std::abs(discrete - t.samples[i - 1].energy.rate));
  }
  return {worst, nonpositive};
}

Outcome energy_dissipation() {
  MonteCarloConfig mc;
  bool pass = true;
  double rmin = 1e9, rmax = 0.0;
  for (std::size_t run = 0; run < 3; ++run) {
    const BodyModel m = build_body_model(generate_instance(mc, run).instance, mc.mu);
    // Full trajectory to convergence: analytic rate never positive.
    SimConfig full;
    full.record_every = 1;
    for (const auto& s : simulate(m, initial_state(m), full).samples) {
      if (s.energy.rate > 0.0) pass = false;
    }
    const auto [e1, ok1] = rate_discrepancy(m, 0.02);
    const auto [e2, ok2] = rate_discrepancy(m, 0.01);
    const auto [e3, ok3] = rate_discrepancy(m, 0.005);
    pass = pass && ok1 && ok2 && ok3;
    for (double r : {e1 / e2, e2 / e3}) {
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      if (!(r >= 1.6 && r <= 2.4)) pass = false;
    }
  }
  return {pass, fmt("Vdot <= 0 on all samples; halving ratios in [%.3f, %.3f]", rmin, rmax)};
}

Outcome potential_identity() {
  MonteCarloConfig mc;
  double worst = 0.0;
  for (std::size_t run = 0; run < 10; ++run) {
    const GeneratedInstance g = generate_instance(mc, run);
    const BodyModel m = build_body_model(g.instance, mc.mu);
    Rng rng = make_run_rng(4242, run);
    std::normal_distribution<double> n;
    for (int k = 0; k < 100; ++k) {
      Pose p;
      p.rotation = random_rotation(rng);
      p.translation = Vec3(n(rng), n(rng), n(rng));
      const double obj = objective_value(g.instance, p);
      const double vp = potential_energy(m, state_from_pose(p, m));
      worst = std::max(worst, std::abs(vp - obj) / obj);
    }
  }
  return {worst <= 1e-9, fmt("max relative |Vp - objective| = %.3g over 1000 poses", worst)};
}

Outcome symmetry_continua() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  const double kl2 = 2.0;  // sigma = 1, l = 1
  double worst = 0.0;
  int broken = 0;
  for (int i = 0; i < 100; ++i) {
    const double theta = u(rng);
    worst = std::max(worst, symmetry_torque_residual(make_equilateral_triangle(1.0, theta)));
    worst = std::max(worst, symmetry_torque_residual(make_square(1.0, theta)));
    ProblemInstance p = make_equilateral_triangle(1.0, theta);
    p.model_points[0] += 0.1 * Vec3(std::cos(0.7), std::sin(0.7), 0.0);
    if (symmetry_torque_residual(p) > 1e-3 * kl2) ++broken;
  }
  return {worst <= 1e-12 * kl2 && broken >= 95,
          fmt("max residual %.3g k l^2; perturbation breaks %.0f/100", worst / kl2,
              double(broken))};
}

Outcome escape() {
  MonteCarloConfig mc;
  int good = 0, total = 0;
  double worst = 0.0;
  for (std::size_t run = 0; run < 20; ++run) {
    const GeneratedInstance g = generate_instance(mc, run);
    const BodyModel m = build_body_model(g.instance, mc.mu);
    const Rotation horn = horn_solve(g.instance).rotation;
    const auto certs = enumerate_equilibria(m);
    SimConfig cfg;
    cfg.perturbation_scale = 1e-3 * m.scale();
    for (const auto& c : certs) {
      if (c.unstable_count == 0) continue;
      ++total;
      const Trajectory t = escape_and_resimulate(m, c, cfg, run * 4 + total);
      const double err = rotation_geodesic_error(pose_from_state(t.final_state, m).rotation, horn);
      worst = std::max(worst, err);
      if (t.termination == Termination::Converged && err < kHalfDegree) ++good;
    }
  }
  return {good == 60 && total == 60,
          fmt("%.0f/%.0f escapes reach the optimum (worst %.3g rad)", good, total, worst)};
}

Outcome robust_reduction() {
  MonteCarloConfig mc;
  double worst = 0.0;
  bool same_length = true;
  for (std::size_t run = 0; run < 3; ++run) {
    const BodyModel m = build_body_model(generate_instance(mc, run).instance, mc.mu);
    SimConfig cfg;
    cfg.record_every = 1;
    const Trajectory a = simulate(m, initial_state(m), cfg);
    const Trajectory b = robust_simulate(RobustSpringModel(m, 1e9), initial_state(m), cfg);
    if (a.samples.size() != b.samples.size()) {
      same_length = false;
      continue;
    }
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      worst = std::max(worst, (a.samples[i].state.flatten() - b.samples[i].state.flatten())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
  }
  const BodyModel m = build_body_model(generate_instance(mc, 0).instance, mc.mu);
  State far;
  far.com_position = Vec3(100.0 * m.scale(), 0.0, 0.0);
  const Trajectory s = robust_simulate(RobustSpringModel(m, 10.0), far, SimConfig{});
  const bool stalled = s.termination == Termination::Stalled && s.steps == 0;
  return {same_length && worst <= 1e-9 && stalled,
          fmt("max per-sample deviation %.3g; saturated start: ", worst) +
              std::string(to_string(s.termination)) + " at step " + std::to_string(s.steps)};
}

Outcome oracle_equivalence() {
  MonteCarloConfig mc;
  mc.n_points = 4;
  std::mt19937_64 rng(2024);
  int extra = 0, roots = 0;
  for (std::size_t run = 0; run < 10; ++run) {
    const BodyModel m = build_body_model(generate_instance(mc, run).instance, mc.mu);
    const auto certs = enumerate_equilibria(m);
    const double tol = 1e-6 * torque_scale(m);
    for (int start = 0; start < 500; ++start) {
      const auto root = oracle::torque_descent(m, oracle::random_rotation_axis_angle(rng));
      if (root.residual >= tol) continue;
      ++roots;
      double nearest = kPi;
      for (const auto& c : certs) {
        nearest = std::min(nearest, rotation_geodesic_error(root.rotation, c.rotation.matrix()));
      }
      if (nearest > 1e-3) ++extra;
    }
  }
  return {extra == 0, fmt("%.0f converged restarts, %.0f outside the enumerated four",
                          double(roots), double(extra))};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  EquilibriaData eq;
  bool eq_ok = true;
  std::string eq_error;
  try {
    eq = equilibria_data();
  } catch (const std::exception& e) {
    eq_ok = false;
    eq_error = e.what();
  }
  auto needs_eq = [&](Outcome (*f)(const EquilibriaData&)) {
    return [&, f]() { return eq_ok ? f(eq) : Outcome{false, "study failed: " + eq_error}; };
  };
  const std::vector<Criterion> criteria = {
      {"equilibrium count", needs_eq(equilibrium_count)},
      {"stability classification", needs_eq(stability_classification)},
      {"180 degree spurious rotations", needs_eq(spurious_rotations)},
      {"simulation optimality", simulation_optimality},
      {"energy dissipation", energy_dissipation},
      {"potential-objective identity", potential_identity},
      {"symmetry continua", symmetry_continua},
      {"escape from spurious equilibria", escape},
      {"robust branch reduction and stall", robust_reduction},
      {"oracle equivalence on small instances", oracle_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
