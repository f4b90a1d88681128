#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynreg/dynamics.hpp"
#include "dynreg/instance.hpp"

namespace dynreg {

// Serial is the reference; Parallel distributes runs over OpenMP threads and
// must produce identical records.
enum class Execution { Serial, Parallel };

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  Pose horn;
  double horn_torque_residual = 0.0;  // relative, see torque_scale()
  std::optional<Pose> simulated;
  double rotation_error = 0.0;  // simulated vs horn, radians
  std::size_t steps = 0;
  std::optional<Termination> termination;
  double final_potential = 0.0;
  double horn_objective = 0.0;
  std::size_t equilibria = 0;
  std::vector<int> unstable_counts;   // per equilibrium, sorted
  std::vector<double> errors_vs_horn;  // per equilibrium, radians
  bool passed = false;
  std::string failure;
  double wall_seconds = 0.0;  // not written to CSV
};

struct EigenvalueRow {
  std::size_t run = 0;
  std::size_t equilibrium = 0;
  int unstable_count = 0;
  std::complex<double> value;
};

struct StudyResult {
  std::vector<RunRecord> records;
  std::vector<EigenvalueRow> eigenvalues;  // equilibria study only
  std::vector<TrajectorySample> energy_trace;  // simulation study, run 0

  bool all_passed() const;
};

// Per run: generate, enumerate equilibria, classify. A run passes when it
// has exactly four certified equilibria with unstable counts {0,1,2,3}, the
// stable one matches Horn, and the other three sit pi away from it.
StudyResult run_equilibria_study(const MonteCarloConfig& config,
                                 Execution exec = Execution::Parallel);

// Per run: generate, simulate from rest, compare with Horn. A run passes
// when it converges within max_steps, lands within 0.5 degrees of Horn, and
// ends with |V_p - objective(Horn)| <= 0.01 (1 + objective(Horn)).
StudyResult run_simulation_study(const MonteCarloConfig& config,
                                 Execution exec = Execution::Parallel);

// CSV writers. Lines starting with '#' carry the configuration.
void write_runs_csv(std::ostream& os, const MonteCarloConfig& config,
                    const std::string& study, const StudyResult& result);
void write_eigenvalues_csv(std::ostream& os, const StudyResult& result);
void write_energy_csv(std::ostream& os,
                      const std::vector<TrajectorySample>& samples);

// Writes runs.csv plus eigenvalues.csv or energy_trace.csv into `dir`.
void write_study_outputs(const std::filesystem::path& dir,
                         const MonteCarloConfig& config,
                         const std::string& study, const StudyResult& result);

}  // namespace dynreg
