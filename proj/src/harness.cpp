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

#include "greencell/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "greencell/errors.hpp"
#include "greencell/validation.hpp"

namespace greencell {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out.precision(17);
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir);
}

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return xs.empty() ? 0.0 : total / static_cast<double>(xs.size());
}

// standard error of the mean: sample std / sqrt(n)
double sem_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  const auto n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

RealizationInputs build_inputs(const RunConfig& cfg, double mean_users,
                               std::uint64_t realization_seed) {
  RealizationInputs inputs;
  if (!cfg.scenario.topology_file.empty()) {
    std::ifstream in(cfg.scenario.topology_file);
    if (!in) {
      throw ConfigError("cannot open topology file: " + cfg.scenario.topology_file);
    }
    inputs.topo = read_topology(in);
  } else {
    inputs.topo = generate_hex_grid(cfg.scenario.grid_rows, cfg.scenario.grid_cols,
                                    cfg.scenario.spacing_m, cfg.scenario.bandwidth_hz,
                                    cfg.scenario.static_power_w);
  }
  if (!cfg.scenario.users_file.empty()) {
    std::ifstream in(cfg.scenario.users_file);
    if (!in) throw ConfigError("cannot open users file: " + cfg.scenario.users_file);
    inputs.users = read_users(in);
  } else {
    inputs.users = sample_users(derive_seed(realization_seed, 1), mean_users,
                                cfg.scenario.rate_bps, cfg.scenario.hotspots,
                                inputs.topo.extent_m);
  }
  if (inputs.users.users.empty()) {
    throw InfeasibleError("snapshot contains no users (degenerate draw)");
  }
  const auto shadow =
      sample_shadow_db(derive_seed(realization_seed, 2), inputs.topo.size(),
                       inputs.users.size(), cfg.radio.shadow_sigma_db);
  inputs.link = build_link_matrix(inputs.topo, inputs.users, cfg.radio, shadow);
  return inputs;
}

SolveOutcome solve_instance(const RealizationInputs& inputs, const MMConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SolveOutcome outcome;
  auto [relaxed, trace] = run(inputs.link, inputs.topo, inputs.users, cfg);
  outcome.relaxed = std::move(relaxed);
  outcome.trace = std::move(trace);
  outcome.assignment =
      round_assignment(outcome.relaxed, inputs.link, inputs.topo, inputs.users);
  outcome.energy = energy_of(outcome.assignment, inputs.topo);
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

void write_trace_csv(const std::string& path, const SolveTrace& trace) {
  auto out = open_out(path);
  out << "iteration,objective,active_count\n";
  for (std::size_t t = 0; t < trace.objective_per_iter.size(); ++t) {
    out << t << ',' << trace.objective_per_iter[t] << ','
        << trace.active_count_per_iter[t] << '\n';
  }
}

void write_assignment_file(const std::string& path,
                           const BinaryAssignment& assignment,
                           const EnergyReport& energy) {
  auto out = open_out(path);
  write_assignment(out, assignment);
  out << "# active_count " << energy.active_count << '\n';
  out << "# total_power_w " << energy.total_power_w << '\n';
}

int cmd_solve(const RunConfig& cfg) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  // same derivation as the first sweep cell, so a one-point sweep with one
  // realization reproduces `solve` exactly
  const auto inputs = build_inputs(cfg, cfg.scenario.mean_users,
                                   derive_seed(cfg.scenario.seed, 0, 0));
  const auto outcome = solve_instance(inputs, cfg.solver);
  write_trace_csv(cfg.out_dir + "/trace.csv", outcome.trace);
  write_assignment_file(cfg.out_dir + "/assignment.txt", outcome.assignment,
                        outcome.energy);
  {
    auto out = open_out(cfg.out_dir + "/config.json");
    out << config_to_text(cfg);
  }
  std::cout << "solve: " << outcome.energy.active_count << " active stations, "
            << outcome.energy.total_power_w << " W, "
            << outcome.trace.iterations_used << " iterations ("
            << (outcome.trace.termination_reason == TerminationReason::tolerance
                    ? "tolerance"
                    : "max_iters")
            << "), " << outcome.wall_seconds << " s\n";
  return 0;
}

SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& options) {
  cfg.validate();
  std::vector<double> levels = cfg.scenario.lambda_list;
  if (levels.empty()) levels.push_back(cfg.scenario.mean_users);

  SweepResult result;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    std::vector<double> mm_counts, greedy_counts, nearest_counts, brute_counts;
    std::vector<double> mm_energy;
    for (int rep = 0; rep < cfg.realizations; ++rep) {
      SweepRow row;
      row.lambda = levels[li];
      row.realization = rep;
      row.seed = derive_seed(cfg.scenario.seed, li, static_cast<std::uint64_t>(rep));
      const auto inputs = build_inputs(cfg, levels[li], row.seed);
      row.num_users = static_cast<int>(inputs.users.size());

      const auto outcome = solve_instance(inputs, cfg.solver);
      row.mm_active = outcome.energy.active_count;
      row.mm_energy_w = outcome.energy.total_power_w;
      row.mm_iterations = outcome.trace.iterations_used;
      row.mm_wall_s = outcome.wall_seconds;

      const auto nearest =
          nearest_station_solution(inputs.link, inputs.topo, inputs.users);
      const auto nearest_energy = energy_of(nearest, inputs.topo);
      row.nearest_active = nearest_energy.active_count;
      row.nearest_energy_w = nearest_energy.total_power_w;

      const auto greedy = greedy_switchoff(inputs.link, inputs.topo, inputs.users);
      const auto greedy_energy = energy_of(greedy, inputs.topo);
      row.greedy_active = greedy_energy.active_count;
      row.greedy_energy_w = greedy_energy.total_power_w;

      if (options.enable_bruteforce) {
        const auto brute =
            brute_force_optimum(inputs.link, inputs.topo.capacities_hz());
        row.brute_active = brute.min_active_count;
        row.brute_energy_w = energy_of(brute.assignment, inputs.topo).total_power_w;
        brute_counts.push_back(static_cast<double>(row.brute_active));
      }

      mm_counts.push_back(static_cast<double>(row.mm_active));
      greedy_counts.push_back(static_cast<double>(row.greedy_active));
      nearest_counts.push_back(static_cast<double>(row.nearest_active));
      mm_energy.push_back(row.mm_energy_w);
      result.rows.push_back(row);
    }
    SweepSummaryRow summary;
    summary.lambda = levels[li];
    summary.realizations = cfg.realizations;
    summary.mm_mean = mean_of(mm_counts);
    summary.mm_sem = sem_of(mm_counts);
    summary.greedy_mean = mean_of(greedy_counts);
    summary.greedy_sem = sem_of(greedy_counts);
    summary.nearest_mean = mean_of(nearest_counts);
    summary.nearest_sem = sem_of(nearest_counts);
    if (!brute_counts.empty()) {
      summary.brute_mean = mean_of(brute_counts);
      summary.brute_sem = sem_of(brute_counts);
    }
    summary.mm_energy_mean = mean_of(mm_energy);
    summary.mm_energy_sem = sem_of(mm_energy);
    result.summary.push_back(summary);
  }
  return result;
}

void write_sweep_files(const std::string& out_dir, const SweepResult& result) {
  {
    auto out = open_out(out_dir + "/sweep_runs.csv");
    out << "lambda,realization,seed,num_users,mm_active,mm_energy_w,mm_iterations,"
           "mm_wall_s,nearest_active,nearest_energy_w,greedy_active,"
           "greedy_energy_w,brute_active,brute_energy_w\n";
    for (const auto& r : result.rows) {
      out << r.lambda << ',' << r.realization << ',' << r.seed << ',' << r.num_users
          << ',' << r.mm_active << ',' << r.mm_energy_w << ',' << r.mm_iterations
          << ',' << r.mm_wall_s << ',' << r.nearest_active << ','
          << r.nearest_energy_w << ',' << r.greedy_active << ',' << r.greedy_energy_w
          << ',' << r.brute_active << ',' << r.brute_energy_w << '\n';
    }
  }
  {
    auto out = open_out(out_dir + "/sweep_summary.csv");
    out << "lambda,realizations,mm_mean,mm_sem,greedy_mean,greedy_sem,nearest_mean,"
           "nearest_sem,brute_mean,brute_sem,mm_energy_mean,mm_energy_sem\n";
    for (const auto& s : result.summary) {
      out << s.lambda << ',' << s.realizations << ',' << s.mm_mean << ',' << s.mm_sem
          << ',' << s.greedy_mean << ',' << s.greedy_sem << ',' << s.nearest_mean
          << ',' << s.nearest_sem << ',' << s.brute_mean << ',' << s.brute_sem << ','
          << s.mm_energy_mean << ',' << s.mm_energy_sem << '\n';
    }
  }
}

int cmd_sweep(const RunConfig& cfg, const SweepOptions& options) {
  ensure_dir(cfg.out_dir);
  const auto result = run_sweep(cfg, options);
  write_sweep_files(cfg.out_dir, result);
  {
    auto out = open_out(cfg.out_dir + "/config.json");
    out << config_to_text(cfg);
  }
  for (const auto& s : result.summary) {
    std::cout << "lambda " << s.lambda << ": mm " << s.mm_mean << " +- " << s.mm_sem
              << ", greedy " << s.greedy_mean << " +- " << s.greedy_sem
              << ", nearest " << s.nearest_mean << " +- " << s.nearest_sem;
    if (s.brute_mean >= 0.0) {
      std::cout << ", optimum " << s.brute_mean << " +- " << s.brute_sem;
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_generate(const RunConfig& cfg) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  const auto topo = generate_hex_grid(cfg.scenario.grid_rows, cfg.scenario.grid_cols,
                                      cfg.scenario.spacing_m,
                                      cfg.scenario.bandwidth_hz,
                                      cfg.scenario.static_power_w);
  // same stream as `solve`, so an exported snapshot reproduces that run
  const auto users = sample_users(derive_seed(derive_seed(cfg.scenario.seed, 0, 0), 1),
                                  cfg.scenario.mean_users, cfg.scenario.rate_bps,
                                  cfg.scenario.hotspots, topo.extent_m);
  {
    auto out = open_out(cfg.out_dir + "/topology.txt");
    write_topology(out, topo);
  }
  {
    auto out = open_out(cfg.out_dir + "/users.txt");
    write_users(out, users);
  }
  std::cout << "generate: " << topo.size() << " stations, " << users.size()
            << " users -> " << cfg.out_dir << "\n";
  return 0;
}

int cmd_validate(const RunConfig& cfg, const ValidateArgs& args) {
  cfg.validate();
  validation::SuiteOptions options;
  options.tolerance_scale = args.strict ? 0.1 : 1.0;
  options.corrupt_gradient = args.inject_gradient_error;
  options.seed = cfg.scenario.seed;
  const auto results = validation::run_invariant_suite(options);
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
              << '\n';
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace greencell
