// Command-line front end: horn, simulate, equilibria, symmetry, robust,
// montecarlo, generate.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynreg/cloud_io.hpp"
#include "dynreg/dynamics.hpp"
#include "dynreg/equilibria.hpp"
#include "dynreg/horn.hpp"
#include "dynreg/instance.hpp"
#include "dynreg/robust.hpp"
#include "dynreg/study.hpp"
#include "dynreg/symmetry.hpp"

namespace {

using namespace dynreg;
using nlohmann::json;

constexpr int kExitAssertion = 1;
constexpr int kExitInput = 2;

json rotation_json(const Mat3& r) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({r(i, 0), r(i, 1), r(i, 2)});
  return rows;
}

json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

json pose_json(const Pose& p) {
  return {{"rotation", rotation_json(p.rotation.matrix())},
          {"translation", vec_json(p.translation)}};
}

json energy_json(const EnergyReport& e) {
  return {{"Vk", e.kinetic}, {"Vp", e.potential}, {"V", e.total}, {"Vdot", e.rate}};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  return os;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t, const Rotation& horn,
                          bool with_active) {
  os << "step,time,Vk,Vp,V,Vdot,rot_err_vs_horn_rad,com_norm";
  if (with_active) os << ",active_springs";
  os << '\n';
  for (const auto& s : t.samples) {
    const double err = rotation_geodesic_error(project_so3(s.state.rotation), horn);
    os << s.step << ',' << format_real(s.time) << ',' << format_real(s.energy.kinetic) << ','
       << format_real(s.energy.potential) << ',' << format_real(s.energy.total) << ','
       << format_real(s.energy.rate) << ',' << format_real(err) << ','
       << format_real(s.state.com_position.norm());
    if (with_active) os << ',' << s.active_springs;
    os << '\n';
  }
}

json trajectory_summary(const Trajectory& t, const BodyModel& m, const Rotation& horn) {
  const Pose p = pose_from_state(t.final_state, m);
  const TrajectorySample& last = t.samples.back();
  return {{"termination", std::string(to_string(t.termination))},
          {"steps", t.steps},
          {"final_time", last.time},
          {"final_derivative_norm", t.final_derivative_norm},
          {"pose", pose_json(p)},
          {"energies", energy_json(last.energy)},
          {"rot_err_vs_horn_rad", rotation_geodesic_error(p.rotation, horn)}};
}

struct Inputs {
  std::string model;
  std::string scene;
};

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--model", in.model, "model cloud file (x y z [sigma])")->required();
  cmd->add_option("--scene", in.scene, "scene cloud file, same line order")->required();
}

int cmd_horn(const Inputs& in, bool as_json) {
  const ProblemInstance inst = load_instance(in.model, in.scene);
  const Pose p = horn_solve(inst);
  const double obj = objective_value(inst, p);
  if (as_json) {
    json out = pose_json(p);
    out["objective"] = obj;
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  const Mat3& r = p.rotation.matrix();
  for (int i = 0; i < 3; ++i) {
    std::cout << format_real(r(i, 0)) << ' ' << format_real(r(i, 1)) << ' '
              << format_real(r(i, 2)) << '\n';
  }
  std::cout << format_real(p.translation.x()) << ' ' << format_real(p.translation.y()) << ' '
            << format_real(p.translation.z()) << '\n'
            << "objective " << format_real(obj) << '\n';
  return 0;
}

int cmd_simulate(const Inputs& in, double mu, const SimConfig& cfg, const std::string& csv) {
  const ProblemInstance inst = load_instance(in.model, in.scene);
  const BodyModel m = build_body_model(inst, mu);
  const Rotation horn = horn_solve(inst).rotation;
  const Trajectory t = simulate(m, initial_state(m), cfg);
  if (!csv.empty()) {
    auto os = open_output(csv);
    write_trajectory_csv(os, t, horn, false);
  }
  json out = trajectory_summary(t, m, horn);
  out["mu"] = mu;
  out["dt"] = cfg.dt;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_equilibria(const Inputs& in, double mu) {
  const ProblemInstance inst = load_instance(in.model, in.scene);
  const BodyModel m = build_body_model(inst, mu);
  json certs = json::array();
  for (const auto& c : enumerate_equilibria(m)) {
    json ev = json::array();
    for (const auto& l : c.eigenvalues) ev.push_back({l.real(), l.imag()});
    certs.push_back({{"rotation", rotation_json(c.rotation.matrix())},
                     {"torque_residual", c.torque_residual},
                     {"relative_torque_residual", c.relative_torque_residual},
                     {"unstable_count", c.unstable_count},
                     {"rotation_error_vs_horn_rad", c.rotation_error_vs_horn},
                     {"eigenvalues", ev}});
  }
  std::cout << json{{"equilibria", certs}}.dump(2) << '\n';
  return 0;
}

int cmd_symmetry(const std::string& shape, double theta, int samples, double length) {
  if (samples < 1) throw InvalidArgument("--samples must be >= 1");
  if (!(length > 0.0)) throw InvalidArgument("--length must be positive");
  const double kl2 = 2.0 * length * length;  // sigma = 1
  std::cout << "theta,residual,residual_over_kl2\n";
  for (int j = 0; j < samples; ++j) {
    const double th = theta + 2.0 * std::numbers::pi * j / samples;
    const ProblemInstance inst = shape == "triangle" ? make_equilateral_triangle(length, th)
                                                     : make_square(length, th);
    const double r = symmetry_torque_residual(inst);
    std::cout << format_real(th) << ',' << format_real(r) << ',' << format_real(r / kl2) << '\n';
  }
  return 0;
}

int cmd_robust(const Inputs& in, double mu, double cbar, std::optional<double> beta,
               bool outlier_report, const SimConfig& cfg, const std::string& csv) {
  const ProblemInstance inst = load_instance(in.model, in.scene);
  const BodyModel m = build_body_model(inst, mu);
  std::vector<double> betas;
  if (beta) betas.assign(m.size(), *beta);
  const RobustSpringModel rm(m, cbar, betas);
  const Rotation horn = horn_solve(inst).rotation;
  const Trajectory t = robust_simulate(rm, initial_state(m), cfg);
  if (!csv.empty()) {
    auto os = open_output(csv);
    write_trajectory_csv(os, t, horn, true);
  }
  json out = trajectory_summary(t, m, horn);
  out["cbar"] = cbar;
  const SpringEvaluation ev = evaluate_springs(rm, t.final_state);
  out["active_springs"] = ev.active;
  if (outlier_report) {
    json cut = json::array();
    for (std::size_t i = 0; i < ev.coefficients.size(); ++i) {
      if (ev.coefficients[i] == 0.0) cut.push_back(i);
    }
    out["outliers"] = cut;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_montecarlo(const std::string& study, MonteCarloConfig mc, bool runs_given,
                   const std::string& dir) {
  if (!runs_given) mc.runs = study == "equilibria" ? 50 : 100;
  const StudyResult res =
      study == "equilibria" ? run_equilibria_study(mc) : run_simulation_study(mc);
  if (!dir.empty()) write_study_outputs(dir, mc, study, res);
  std::size_t passed = 0;
  for (const auto& r : res.records) {
    if (r.passed) {
      ++passed;
    } else {
      std::cerr << "run " << r.run << " failed: " << r.failure << '\n';
    }
  }
  std::cout << json{{"study", study},
                    {"runs", mc.runs},
                    {"points", mc.n_points},
                    {"sigma", mc.sigma},
                    {"seed", mc.seed},
                    {"mu", mc.mu},
                    {"passed", passed},
                    {"all_passed", res.all_passed()}}
                   .dump(2)
            << '\n';
  return res.all_passed() ? 0 : kExitAssertion;
}

int cmd_generate(MonteCarloConfig mc, std::size_t run, const Inputs& out) {
  const GeneratedInstance g = generate_instance(mc, run);
  auto m = open_output(out.model);
  auto s = open_output(out.scene);
  write_cloud(m, g.instance.model_points, g.instance.sigmas);
  write_cloud(s, g.instance.scene_points, g.instance.sigmas);
  std::cout << json{{"ground_truth", pose_json(g.ground_truth)}}.dump(2) << '\n';
  return 0;
}

void add_sim_options(CLI::App* cmd, SimConfig& cfg, double& mu) {
  cmd->add_option("--mu", mu, "damping coefficient")->capture_default_str();
  cmd->add_option("--dt", cfg.dt, "time step")->capture_default_str();
  cmd->add_option("--stop", cfg.stop_threshold, "stop when |state rate| falls below")
      ->capture_default_str();
  cmd->add_option("--max-steps", cfg.max_steps, "step budget")->capture_default_str();
  cmd->add_option("--every", cfg.record_every, "record every N steps")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Registration by simulating a spring-damper rigid body"};
  app.require_subcommand(1);

  Inputs in;
  bool as_json = false;
  double mu = 1.0;
  SimConfig cfg;
  std::string csv;

  auto* horn = app.add_subcommand("horn", "closed-form weighted registration");
  add_inputs(horn, in);
  horn->add_flag("--json", as_json, "print JSON");

  auto* sim = app.add_subcommand("simulate", "integrate the spring-damper system from rest");
  add_inputs(sim, in);
  add_sim_options(sim, cfg, mu);
  sim->add_option("--csv", csv, "energy trace output");

  auto* eq = app.add_subcommand("equilibria", "enumerate and classify the four equilibria");
  add_inputs(eq, in);
  eq->add_flag("--json", as_json, "print JSON (the only format)");
  eq->add_option("--mu", mu, "damping coefficient")->capture_default_str();

  std::string shape;
  double theta = 0.0;
  int samples = 1;
  double length = 1.0;
  auto* sym = app.add_subcommand("symmetry", "torque residual of symmetric planar shapes");
  sym->add_option("--shape", shape)->required()->check(CLI::IsMember({"triangle", "square"}));
  sym->add_option("--theta", theta, "first angle (rad); samples are spaced 2pi/N")
      ->capture_default_str();
  sym->add_option("--samples", samples)->capture_default_str();
  sym->add_option("--length", length, "circumradius")->capture_default_str();

  double cbar = 0.0;
  std::optional<double> beta;
  bool outlier_report = false;
  auto* rob = app.add_subcommand("robust", "simulate with truncated springs");
  add_inputs(rob, in);
  add_sim_options(rob, cfg, mu);
  rob->add_option("--cbar", cbar, "truncation level")->required();
  rob->add_option("--beta", beta, "common beta (default: each point's sigma)");
  rob->add_flag("--outlier-report", outlier_report, "list springs cut at the end");
  rob->add_option("--csv", csv, "energy trace output");

  std::string study;
  MonteCarloConfig mc;
  std::string out_dir;
  auto* monte = app.add_subcommand("montecarlo", "seeded Monte Carlo study");
  monte->add_option("--study", study)->required()->check(
      CLI::IsMember({"equilibria", "simulation"}));
  auto* runs_opt = monte->add_option("--runs", mc.runs, "default 50 / 100");
  monte->add_option("--points", mc.n_points)->capture_default_str();
  monte->add_option("--sigma", mc.sigma)->capture_default_str();
  monte->add_option("--seed", mc.seed)->capture_default_str();
  monte->add_option("--mu", mc.mu)->capture_default_str();
  monte->add_option("--out", out_dir, "directory for CSV outputs");

  std::size_t run = 0;
  Inputs gen_out;
  auto* gen = app.add_subcommand("generate", "write one Monte Carlo instance as cloud files");
  gen->add_option("--model", gen_out.model)->required();
  gen->add_option("--scene", gen_out.scene)->required();
  gen->add_option("--points", mc.n_points)->capture_default_str();
  gen->add_option("--sigma", mc.sigma)->capture_default_str();
  gen->add_option("--seed", mc.seed)->capture_default_str();
  gen->add_option("--run", run)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*horn) return cmd_horn(in, as_json);
    if (*sim) return cmd_simulate(in, mu, cfg, csv);
    if (*eq) return cmd_equilibria(in, mu);
    if (*sym) return cmd_symmetry(shape, theta, samples, length);
    if (*rob) return cmd_robust(in, mu, cbar, beta, outlier_report, cfg, csv);
    if (*monte) return cmd_montecarlo(study, mc, runs_opt->count() > 0, out_dir);
    if (*gen) return cmd_generate(mc, run, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
