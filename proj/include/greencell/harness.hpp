// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GREENCELL_HARNESS_HPP
#define GREENCELL_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "greencell/baselines.hpp"
#include "greencell/config.hpp"
#include "greencell/mm.hpp"
#include "greencell/rounding.hpp"

namespace greencell {

/// Everything the solvers consume for one realization. Built once per
/// (load level, realization) and shared by every competitor so the
/// comparison is fair by construction.
struct RealizationInputs {
  NetworkTopology topo;
  UserSnapshot users;
  LinkMatrix link;
};

/// Assembles topology (grid or imported file), user snapshot (sampled or
/// imported) and the link matrix. `realization_seed` fully determines all
/// randomness.
RealizationInputs build_inputs(const RunConfig& cfg, double mean_users,
                               std::uint64_t realization_seed);

struct SolveOutcome {
  SolveTrace trace;
  RelaxedAssignment relaxed;
  BinaryAssignment assignment;
  EnergyReport energy;
  double wall_seconds = 0.0;
};

/// Relaxation, reweighting loop, rounding, energy accounting.
SolveOutcome solve_instance(const RealizationInputs& inputs, const MMConfig& cfg);

void write_trace_csv(const std::string& path, const SolveTrace& trace);
void write_assignment_file(const std::string& path,
                           const BinaryAssignment& assignment,
                           const EnergyReport& energy);

struct SweepRow {
  double lambda = 0.0;  // configured mean user count at this level
  int realization = 0;
  std::uint64_t seed = 0;
  int num_users = 0;
  int mm_active = 0;
  double mm_energy_w = 0.0;
  int mm_iterations = 0;
  double mm_wall_s = 0.0;
  int nearest_active = 0;
  double nearest_energy_w = 0.0;
  int greedy_active = 0;
  double greedy_energy_w = 0.0;
  int brute_active = -1;  // -1 when the exhaustive oracle is off
  double brute_energy_w = 0.0;
};

struct SweepSummaryRow {
  double lambda = 0.0;
  int realizations = 0;
  double mm_mean = 0.0, mm_sem = 0.0;
  double greedy_mean = 0.0, greedy_sem = 0.0;
  double nearest_mean = 0.0, nearest_sem = 0.0;
  double brute_mean = -1.0, brute_sem = 0.0;
  double mm_energy_mean = 0.0, mm_energy_sem = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepSummaryRow> summary;
};

struct SweepOptions {
  bool enable_bruteforce = false;
};

/// One fresh snapshot per (load level, realization); all solvers run on
/// identical inputs; means and standard errors of the mean per level.
SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& options);

void write_sweep_files(const std::string& out_dir, const SweepResult& result);

// Subcommand bodies. They write their outputs under cfg.out_dir and
// return a process exit code (0 on success; validation returns 1 when a
// check fails). Infeasible/solver/config failures surface as exceptions
// for the CLI to map onto exit codes.
int cmd_solve(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg, const SweepOptions& options);
int cmd_generate(const RunConfig& cfg);

struct ValidateArgs {
  bool strict = false;
  bool inject_gradient_error = false;
};
int cmd_validate(const RunConfig& cfg, const ValidateArgs& args);

}  // namespace greencell

#endif  // GREENCELL_HARNESS_HPP
