#include "dynreg/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "dynreg/cloud_io.hpp"
#include "dynreg/equilibria.hpp"
#include "dynreg/horn.hpp"

namespace dynreg {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpuriousTol = 1e-6;
constexpr double kMaxSimErrorRad = 0.5 * kPi / 180.0;

struct RunOutput {
  RunRecord record;
  std::vector<EigenvalueRow> eigenvalues;
  std::vector<TrajectorySample> trace;
};

double horn_relative_residual(const BodyModel& model, const Pose& horn) {
  return torque_residual(model, horn.rotation.matrix()) / torque_scale(model);
}

RunOutput equilibria_run(const MonteCarloConfig& config, std::size_t run) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  RunRecord& rec = out.record;
  rec.run = run;
  rec.seed = config.seed;

  const GeneratedInstance gen = generate_instance(config, run);
  const BodyModel model = build_body_model(gen.instance, config.mu);
  rec.horn = horn_solve(gen.instance);
  rec.horn_torque_residual = horn_relative_residual(model, rec.horn);
  try {
    const auto certs = enumerate_equilibria(model);
    rec.equilibria = certs.size();
    for (std::size_t e = 0; e < certs.size(); ++e) {
      rec.unstable_counts.push_back(certs[e].unstable_count);
      rec.errors_vs_horn.push_back(certs[e].rotation_error_vs_horn);
      for (const auto& lambda : certs[e].eigenvalues) {
        out.eigenvalues.push_back({run, e, certs[e].unstable_count, lambda});
      }
    }
    bool ok = certs.size() == 4;
    if (!ok) rec.failure = "expected 4 equilibria";
    if (ok && rec.unstable_counts != std::vector<int>{0, 1, 2, 3}) {
      ok = false;
      rec.failure = "unstable counts are not {0,1,2,3}";
    }
    if (ok && certs[0].rotation_error_vs_horn > kSpuriousTol) {
      ok = false;
      rec.failure = "stable equilibrium differs from Horn";
    }
    for (std::size_t e = 1; ok && e < certs.size(); ++e) {
      if (certs[e].rotation_error_vs_horn < kPi - kSpuriousTol) {
        ok = false;
        rec.failure = "spurious equilibrium not at 180 degrees";
      }
    }
    rec.passed = ok;
  } catch (const DegenerateSpectrum& e) {
    rec.failure = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

RunOutput simulation_run(const MonteCarloConfig& config, std::size_t run) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  RunRecord& rec = out.record;
  rec.run = run;
  rec.seed = config.seed;

  const GeneratedInstance gen = generate_instance(config, run);
  const BodyModel model = build_body_model(gen.instance, config.mu);
  rec.horn = horn_solve(gen.instance);
  rec.horn_torque_residual = horn_relative_residual(model, rec.horn);
  rec.horn_objective = objective_value(gen.instance, rec.horn);

  try {
    Trajectory traj = simulate(model, initial_state(model), config.sim);
    const Pose pose = pose_from_state(traj.final_state, model);
    rec.simulated = pose;
    rec.steps = traj.steps;
    rec.termination = traj.termination;
    rec.rotation_error = rotation_geodesic_error(pose.rotation, rec.horn.rotation);
    rec.final_potential = potential_energy(model, traj.final_state);

    bool ok = true;
    if (traj.termination != Termination::Converged) {
      ok = false;
      rec.failure = "did not converge within max_steps";
    } else if (rec.rotation_error >= kMaxSimErrorRad) {
      ok = false;
      rec.failure = "final rotation more than 0.5 deg from Horn";
    } else if (std::abs(rec.final_potential - rec.horn_objective) >
               0.01 * (1.0 + rec.horn_objective)) {
      ok = false;
      rec.failure = "final potential does not match the Horn objective";
    }
    rec.passed = ok;
    if (run == 0) out.trace = std::move(traj.samples);
  } catch (const NonFiniteState& e) {
    rec.failure = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

template <typename RunFn>
StudyResult sweep(const MonteCarloConfig& config, Execution exec, RunFn fn) {
  config.validate();
  const auto runs = static_cast<long>(config.runs);
  std::vector<RunOutput> outputs(config.runs);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < runs; ++r) {
      outputs[static_cast<std::size_t>(r)] =
          fn(config, static_cast<std::size_t>(r));
    }
  } else {
    for (long r = 0; r < runs; ++r) {
      outputs[static_cast<std::size_t>(r)] =
          fn(config, static_cast<std::size_t>(r));
    }
  }
  StudyResult result;
  for (auto& o : outputs) {
    result.records.push_back(std::move(o.record));
    result.eigenvalues.insert(result.eigenvalues.end(), o.eigenvalues.begin(),
                              o.eigenvalues.end());
    if (!o.trace.empty()) result.energy_trace = std::move(o.trace);
  }
  return result;
}

void write_pose(std::ostream& os, const std::optional<Pose>& pose) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      os << ',';
      if (pose) os << format_real(pose->rotation.matrix()(r, c));
    }
  }
  for (int i = 0; i < 3; ++i) {
    os << ',';
    if (pose) os << format_real(pose->translation(i));
  }
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& fmt) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt(v[i]);
  }
  return s;
}

}  // namespace

bool StudyResult::all_passed() const {
  return std::all_of(records.begin(), records.end(),
                     [](const RunRecord& r) { return r.passed; });
}

StudyResult run_equilibria_study(const MonteCarloConfig& config, Execution exec) {
  return sweep(config, exec, equilibria_run);
}

StudyResult run_simulation_study(const MonteCarloConfig& config, Execution exec) {
  return sweep(config, exec, simulation_run);
}

void write_runs_csv(std::ostream& os, const MonteCarloConfig& config,
                    const std::string& study, const StudyResult& result) {
  os << "# study=" << study << " runs=" << config.runs
     << " n_points=" << config.n_points << " sigma=" << format_real(config.sigma)
     << " seed=" << config.seed << " mu=" << format_real(config.mu)
     << " dt=" << format_real(config.sim.dt)
     << " stop=" << format_real(config.sim.stop_threshold)
     << " max_steps=" << config.sim.max_steps << '\n';
  os << "run,seed";
  for (const char* p : {"horn", "sim"}) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) os << ',' << p << "_r" << r << c;
    for (const char* t : {"_tx", "_ty", "_tz"}) os << ',' << p << t;
  }
  os << ",horn_torque_residual,rot_err_rad,steps,termination,final_vp,"
        "horn_objective,n_equilibria,unstable_counts,errors_vs_horn_rad,"
        "passed,failure\n";
  for (const auto& rec : result.records) {
    os << rec.run << ',' << rec.seed;
    write_pose(os, rec.horn);
    write_pose(os, rec.simulated);
    os << ',' << format_real(rec.horn_torque_residual);
    if (rec.simulated) {
      os << ',' << format_real(rec.rotation_error) << ',' << rec.steps << ','
         << to_string(*rec.termination) << ',' << format_real(rec.final_potential)
         << ',' << format_real(rec.horn_objective);
    } else {
      os << ",,,,,";
    }
    os << ',' << rec.equilibria << ','
       << join(rec.unstable_counts, [](int c) { return std::to_string(c); })
       << ',' << join(rec.errors_vs_horn, format_real) << ','
       << (rec.passed ? "true" : "false") << ',' << rec.failure << '\n';
  }
}

void write_eigenvalues_csv(std::ostream& os, const StudyResult& result) {
  os << "run,equilibrium_index,unstable_count,re,im\n";
  for (const auto& row : result.eigenvalues) {
    os << row.run << ',' << row.equilibrium << ',' << row.unstable_count << ','
       << format_real(row.value.real()) << ',' << format_real(row.value.imag())
       << '\n';
  }
}

void write_energy_csv(std::ostream& os,
                      const std::vector<TrajectorySample>& samples) {
  os << "step,time,Vk,Vp,V,Vdot\n";
  for (const auto& s : samples) {
    os << s.step << ',' << format_real(s.time) << ','
       << format_real(s.energy.kinetic) << ',' << format_real(s.energy.potential)
       << ',' << format_real(s.energy.total) << ',' << format_real(s.energy.rate)
       << '\n';
  }
}

void write_study_outputs(const std::filesystem::path& dir,
                         const MonteCarloConfig& config,
                         const std::string& study, const StudyResult& result) {
  std::filesystem::create_directories(dir);
  const auto open = [&dir](const char* name) {
    std::ofstream os(dir / name);
    if (!os) throw Error("cannot write " + (dir / name).string());
    return os;
  };
  {
    auto os = open("runs.csv");
    write_runs_csv(os, config, study, result);
  }
  if (study == "equilibria") {
    auto os = open("eigenvalues.csv");
    write_eigenvalues_csv(os, result);
  } else {
    auto os = open("energy_trace.csv");
    write_energy_csv(os, result.energy_trace);
  }
}

}  // namespace dynreg
