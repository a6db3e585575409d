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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
// with its measured quantities; the process exits nonzero if any selected
// criterion fails. Run `acceptance --criterion N` for one criterion or
// `acceptance` for all ten.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "greencell/baselines.hpp"
#include "greencell/harness.hpp"
#include "greencell/mm.hpp"
#include "greencell/rounding.hpp"
#include "greencell/validation.hpp"

using namespace greencell;

namespace {

constexpr std::uint64_t kMasterSeed = 20260810;

struct Criterion {
  int number;
  const char* title;
  std::function<bool(std::ostringstream&)> body;
};

double elapsed_s(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// 1. every reweighting step decreases the smoothed objective (100 random
// feasible instances, M in [2,10], N in [4,40], slack 1e-8)
bool criterion_monotone_descent(std::ostringstream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(derive_seed(kMasterSeed, 1));
  double worst_increase = -1e300;
  int instances = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng() % 9;    // [2, 10]
    const std::size_t n = 4 + rng() % 37;   // [4, 40]
    const double tightness = 1.1 + 0.5 * (trial % 5) / 5.0;
    const auto inst =
        validation::random_instance(derive_seed(kMasterSeed, 1, trial), m, n, tightness);
    const auto [w, trace] = run(inst.link, inst.topo, inst.users, MMConfig{});
    (void)w;
    for (std::size_t t = 1; t < trace.objective_per_iter.size(); ++t) {
      worst_increase =
          std::max(worst_increase,
                   trace.objective_per_iter[t] - trace.objective_per_iter[t - 1]);
    }
    ++instances;
  }
  const double secs = elapsed_s(start);
  out << "largest per-step objective increase " << worst_increase << " over "
      << instances << " instances (allowed 1e-8), " << secs << " s (cap 120)";
  return worst_increase <= 1e-8 && secs < 120.0;
}

// 2. analytic gradient vs central finite differences at 100 interior points
bool criterion_gradient(std::ostringstream& out) {
  std::mt19937_64 rng(derive_seed(kMasterSeed, 2));
  std::uniform_real_distribution<double> interior(0.05, 0.95);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 6;
    const std::size_t n = 3 + trial % 8;
    std::vector<double> w(m * n);
    for (auto& v : w) v = interior(rng);
    const auto analytic = gradient(w, 1e-3, m, n);
    const auto numeric = validation::objective_fd_gradient(w, 1e-3, m, n, 1e-6);
    for (std::size_t k = 0; k < w.size(); ++k) {
      worst = std::max(worst, std::abs(analytic[k] - numeric[k]) /
                                  std::max(std::abs(numeric[k]), 1e-12));
    }
  }
  out << "max relative error " << worst << " (allowed 1e-6)";
  return worst < 1e-6;
}

// 3. the counting surrogate approaches the support size strictly along
// eps in {1e-2 .. 1e-10} and lands within 5% of it
bool criterion_l0_limit(std::ostringstream& out) {
  bool strict = true;
  double worst_final_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t k = 0;
    const auto h = validation::random_l0_vector(derive_seed(kMasterSeed, 3, trial), &k);
    double prev = 1e300;
    double final_err = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
      const double err =
          std::abs(l0_relaxation_value(h, eps) - static_cast<double>(k));
      if (err >= prev) strict = false;
      prev = err;
      final_err = err;
    }
    const double bound = 0.05 * static_cast<double>(k) + 1e-6;
    worst_final_ratio = std::max(worst_final_ratio, final_err / bound);
    if (final_err >= bound) strict = false;
  }
  out << "strict decrease " << (strict ? "held" : "violated")
      << ", worst final error at " << worst_final_ratio << " of the allowed bound";
  return strict && worst_final_ratio < 1.0;
}

// 4. LP solutions match exhaustive vertex enumeration on 200 small
// instances (status and objective to 1e-7, feasibility to 1e-7)
bool criterion_lp_oracle(std::ostringstream& out) {
  int mismatches = 0;
  double worst_gap = 0.0;
  double worst_violation = 0.0;
  int optimal_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto lp =
        validation::random_assignment_lp(derive_seed(kMasterSeed, 4, trial));
    const auto sol = solve(lp);
    const auto oracle = validation::lp_optimum_by_vertex_enumeration(lp);
    if ((sol.status == LPStatus::optimal) != (oracle.status == LPStatus::optimal)) {
      ++mismatches;
      continue;
    }
    if (sol.status != LPStatus::optimal) continue;
    ++optimal_count;
    worst_gap = std::max(worst_gap, std::abs(sol.objective - oracle.objective));
    std::vector<double> user_sum(lp.num_users, 0.0);
    std::vector<double> cap_sum(lp.num_stations, 0.0);
    for (std::size_t v = 0; v < lp.num_vars(); ++v) {
      user_sum[static_cast<std::size_t>(lp.var_user[v])] += sol.w[v];
      const auto i = static_cast<std::size_t>(lp.var_station[v]);
      cap_sum[i] += sol.w[v] * lp.demand_hz[v] / lp.capacity_hz[i];
      worst_violation =
          std::max({worst_violation, -sol.w[v], sol.w[v] - 1.0});
    }
    for (std::size_t j = 0; j < lp.num_users; ++j) {
      worst_violation = std::max(worst_violation, std::abs(user_sum[j] - 1.0));
    }
    for (std::size_t i = 0; i < lp.num_stations; ++i) {
      worst_violation = std::max(worst_violation, cap_sum[i] - 1.0);
    }
  }
  out << mismatches << " status mismatches, max objective gap " << worst_gap
      << ", max violation " << worst_violation << " over 200 instances ("
      << optimal_count << " feasible; allowed 1e-7)";
  return mismatches == 0 && worst_gap <= 1e-7 && worst_violation <= 1e-7;
}

// 5. on 50 desk-scale instances the rounded solution never beats the
// exhaustive optimum and averages at most 0.5 stations above it
bool criterion_optimality_gap(std::ostringstream& out) {
  const auto start = std::chrono::steady_clock::now();
  int below_optimum = 0;
  double total_gap = 0.0;
  std::mt19937_64 rng(derive_seed(kMasterSeed, 5));
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + rng() % 4;  // [2, 5]
    const std::size_t n = 3 + rng() % 6;  // [3, 8]
    const double tightness = 1.1 + 0.4 * (trial % 4) / 4.0;
    const auto inst =
        validation::random_instance(derive_seed(kMasterSeed, 5, trial), m, n, tightness);
    const auto brute = brute_force_optimum(inst.link, inst.topo.capacities_hz());
    const auto [w, trace] = run(inst.link, inst.topo, inst.users, MMConfig{});
    (void)trace;
    const auto rounded = round_assignment(w, inst.link, inst.topo, inst.users);
    const int gap = rounded.active_count() - brute.min_active_count;
    if (gap < 0) ++below_optimum;
    total_gap += gap;
  }
  const double mean_gap = total_gap / 50.0;
  const double secs = elapsed_s(start);
  out << below_optimum << " impossible sub-optimum results, mean gap " << mean_gap
      << " stations (allowed 0.5), " << secs << " s (cap 300)";
  return below_optimum == 0 && mean_gap <= 0.5 && secs < 300.0;
}

// 6. at desk scale the loop usually stops on tolerance well before the
// iteration cap, and late iterations contribute <10% of the improvement
bool criterion_convergence_profile(std::ostringstream& out) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg;
  cfg.scenario.grid_rows = 5;
  cfg.scenario.grid_cols = 5;
  cfg.scenario.mean_users = 100.0;

  int tolerance_exits = 0;
  double worst_tail_fraction = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto inputs =
        build_inputs(cfg, 100.0, derive_seed(kMasterSeed, 6, rep));
    const auto [w, trace] = run(inputs.link, inputs.topo, inputs.users, cfg.solver);
    (void)w;
    if (trace.termination_reason == TerminationReason::tolerance &&
        trace.iterations_used < 20) {
      ++tolerance_exits;
    }
    const auto& f = trace.objective_per_iter;
    const double total_drop = f.front() - f.back();
    const std::size_t mid = std::min<std::size_t>(10, f.size() - 1);
    const double late_drop = f[mid] - f.back();
    const double fraction = total_drop > 1e-12 ? late_drop / total_drop : 0.0;
    worst_tail_fraction = std::max(worst_tail_fraction, fraction);
  }
  const double secs = elapsed_s(start);
  out << tolerance_exits
      << "/10 runs stopped on tolerance before iteration 20, worst tail fraction "
      << worst_tail_fraction << " (allowed 0.10), " << secs << " s (cap 600)";
  return tolerance_exits >= 8 && worst_tail_fraction < 0.10 && secs < 600.0;
}

struct SweepData {
  SweepResult result;
  std::vector<double> levels;
};

const SweepData& shared_sweep() {
  static const SweepData data = [] {
    SweepData d;
    RunConfig cfg;
    cfg.scenario.grid_rows = 5;
    cfg.scenario.grid_cols = 5;
    cfg.scenario.lambda_list = {60.0, 100.0, 140.0, 180.0};
    cfg.scenario.seed = derive_seed(kMasterSeed, 7);
    cfg.realizations = 10;
    d.levels = cfg.scenario.lambda_list;
    d.result = run_sweep(cfg, SweepOptions{});
    return d;
  }();
  return data;
}

// 7. averaged over the sweep, the proposed solver never needs more
// stations than the greedy switch-off, which never beats nearest-station
bool criterion_baseline_dominance(std::ostringstream& out) {
  const auto& data = shared_sweep();
  bool ok = true;
  out << "mean active stations (mm / greedy / nearest):";
  for (const auto& s : data.result.summary) {
    out << "  [" << s.lambda << "] " << s.mm_mean << " / " << s.greedy_mean << " / "
        << s.nearest_mean;
    if (s.mm_mean > s.greedy_mean + 1e-9 || s.greedy_mean > s.nearest_mean + 1e-9) {
      ok = false;
    }
  }
  return ok;
}

// 8. mean active count grows (weakly) with offered load
bool criterion_load_monotonicity(std::ostringstream& out) {
  const auto& data = shared_sweep();
  bool ok = true;
  out << "mm means along the load ladder:";
  double prev = -1.0;
  for (const auto& s : data.result.summary) {
    out << ' ' << s.mm_mean;
    if (s.mm_mean < prev - 1e-9) ok = false;
    prev = s.mm_mean;
  }
  return ok;
}

// 9. energy equals 400 W per active station under the homogeneous
// default, and the sum of per-station draws under a heterogeneous one
bool criterion_energy_accounting(std::ostringstream& out) {
  RunConfig cfg;
  cfg.scenario.grid_rows = 4;
  cfg.scenario.grid_cols = 4;
  cfg.scenario.mean_users = 40.0;
  const auto inputs = build_inputs(cfg, 40.0, derive_seed(kMasterSeed, 9));
  const auto outcome = solve_instance(inputs, cfg.solver);
  const double expected_homogeneous = 400.0 * outcome.energy.active_count;
  const bool homogeneous_ok =
      outcome.energy.total_power_w == expected_homogeneous;

  auto hetero = inputs;
  for (std::size_t i = 0; i < hetero.topo.size(); ++i) {
    hetero.topo.stations[i].static_power_w = 100.0 + 25.0 * static_cast<double>(i);
  }
  const auto hetero_outcome = solve_instance(hetero, cfg.solver);
  double expected_hetero = 0.0;
  for (auto i : hetero_outcome.assignment.active_set) {
    expected_hetero += hetero.topo.stations[static_cast<std::size_t>(i)].static_power_w;
  }
  const bool hetero_ok =
      std::abs(hetero_outcome.energy.total_power_w - expected_hetero) <
      1e-9 * std::max(1.0, expected_hetero);

  out << "homogeneous " << outcome.energy.total_power_w << " W vs "
      << expected_homogeneous << " W; heterogeneous "
      << hetero_outcome.energy.total_power_w << " W vs " << expected_hetero << " W";
  return homogeneous_ok && hetero_ok;
}

// 10. identical (config, seed) reproduces byte-identical outputs
bool criterion_determinism(std::ostringstream& out) {
  namespace fs = std::filesystem;
  RunConfig cfg;
  cfg.scenario.grid_rows = 4;
  cfg.scenario.grid_cols = 4;
  cfg.scenario.mean_users = 50.0;
  cfg.scenario.seed = derive_seed(kMasterSeed, 10);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
  };

  const fs::path base = fs::temp_directory_path() / "greencell_acceptance";
  fs::remove_all(base);
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";

  cfg.out_dir = dir_a.string();
  if (cmd_solve(cfg) != 0) {
    out << "first solve failed";
    return false;
  }
  cfg.out_dir = dir_b.string();
  if (cmd_solve(cfg) != 0) {
    out << "second solve failed";
    return false;
  }
  const bool trace_equal =
      slurp(dir_a / "trace.csv") == slurp(dir_b / "trace.csv");
  const bool assignment_equal =
      slurp(dir_a / "assignment.txt") == slurp(dir_b / "assignment.txt");
  fs::remove_all(base);
  out << "trace files " << (trace_equal ? "identical" : "differ")
      << ", assignment files " << (assignment_equal ? "identical" : "differ");
  return trace_equal && assignment_equal;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;  // 0 = all
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc) {
      selected = std::atoi(argv[a + 1]);
      ++a;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "monotone descent", criterion_monotone_descent},
      {2, "gradient vs finite differences", criterion_gradient},
      {3, "sparsity-count limit", criterion_l0_limit},
      {4, "LP vertex-oracle equivalence", criterion_lp_oracle},
      {5, "small-instance optimality gap", criterion_optimality_gap},
      {6, "convergence profile", criterion_convergence_profile},
      {7, "baseline dominance", criterion_baseline_dominance},
      {8, "load monotonicity", criterion_load_monotonicity},
      {9, "energy accounting", criterion_energy_accounting},
      {10, "determinism", criterion_determinism},
  };

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (selected != 0 && c.number != selected) continue;
    std::ostringstream detail;
    bool pass = false;
    try {
      pass = c.body(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.number << " ("
              << c.title << "): " << detail.str() << '\n';
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 1;
}
