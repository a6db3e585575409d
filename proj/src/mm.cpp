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

#include "greencell/mm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "greencell/errors.hpp"
#include "greencell/kernels.hpp"

namespace greencell {

namespace {

std::vector<double> station_costs_from_loads(std::span<const double> loads,
                                             double epsilon) {
  std::vector<double> costs(loads.size());
  for (std::size_t i = 0; i < loads.size(); ++i) {
    costs[i] = 1.0 / (epsilon + loads[i]);
  }
  return costs;
}

RelaxedAssignment scatter_solution(const AssignmentLP& lp, const LPSolution& sol) {
  RelaxedAssignment out;
  out.num_stations = lp.num_stations;
  out.num_users = lp.num_users;
  out.w.assign(lp.num_stations * lp.num_users, 0.0);
  for (std::size_t v = 0; v < lp.num_vars(); ++v) {
    const auto i = static_cast<std::size_t>(lp.var_station[v]);
    const auto j = static_cast<std::size_t>(lp.var_user[v]);
    out.w[i + lp.num_stations * j] = sol.w[v];
  }
  return out;
}

std::vector<double> gather_variable_costs(const AssignmentLP& lp,
                                          std::span<const double> station_costs) {
  std::vector<double> costs(lp.num_vars());
  for (std::size_t v = 0; v < lp.num_vars(); ++v) {
    costs[v] = station_costs[static_cast<std::size_t>(lp.var_station[v])];
  }
  return costs;
}

}  // namespace

void MMConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be > 0");
  if (!(epsilon_star > 0.0)) throw InvalidInputError("epsilon_star must be > 0");
  if (max_iters < 1) throw InvalidInputError("max_iters must be >= 1");
}

std::vector<double> row_sums(std::span<const double> w, std::size_t num_stations,
                             std::size_t num_users) {
  if (w.size() != num_stations * num_users) {
    throw InvalidInputError("row_sums: vector length mismatch");
  }
  std::vector<double> sums(num_stations, 0.0);
  for (std::size_t j = 0; j < num_users; ++j) {
    kernels::axpy(1.0, w.subspan(j * num_stations, num_stations), sums);
  }
  return sums;
}

double objective(std::span<const double> w, double epsilon,
                 std::size_t num_stations, std::size_t num_users) {
  const auto sums = row_sums(w, num_stations, num_users);
  double f = 0.0;
  for (double s : sums) f += std::log(epsilon + s);
  return f;
}

std::vector<double> gradient(std::span<const double> w, double epsilon,
                             std::size_t num_stations, std::size_t num_users) {
  const auto sums = row_sums(w, num_stations, num_users);
  std::vector<double> station_grad(num_stations);
  for (std::size_t i = 0; i < num_stations; ++i) {
    station_grad[i] = 1.0 / (epsilon + sums[i]);
  }
  std::vector<double> g(w.size());
  for (std::size_t j = 0; j < num_users; ++j) {
    std::copy(station_grad.begin(), station_grad.end(),
              g.begin() + static_cast<std::ptrdiff_t>(j * num_stations));
  }
  return g;
}

int count_active(std::span<const double> w, std::size_t num_stations,
                 std::size_t num_users, double threshold) {
  const auto sums = row_sums(w, num_stations, num_users);
  int active = 0;
  for (double s : sums) {
    if (s > threshold) ++active;
  }
  return active;
}

RelaxedAssignment initialize(const LinkMatrix& link, const NetworkTopology& topo,
                             const UserSnapshot& users) {
  const std::size_t m = link.num_stations;
  const std::size_t n = link.num_users;
  if (topo.size() != m || users.size() != n) {
    throw InvalidInputError("initialize: dimensions disagree with link matrix");
  }

  RelaxedAssignment out;
  out.num_stations = m;
  out.num_users = n;
  out.w.assign(m * n, 0.0);

  std::vector<double> residual = topo.capacities_hz();
  std::vector<std::size_t> order(m);
  bool greedy_ok = true;
  for (std::size_t j = 0; j < n && greedy_ok; ++j) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return wrap_distance(topo.stations[a].position_m, users.users[j].position_m,
                           topo.extent_m) <
             wrap_distance(topo.stations[b].position_m, users.users[j].position_m,
                           topo.extent_m);
    });
    bool placed = false;
    for (std::size_t i : order) {
      const double b = link.demand(i, j);
      if (std::isfinite(b) && b <= residual[i]) {
        out.w[i + m * j] = 1.0;
        residual[i] -= b;
        placed = true;
        break;
      }
    }
    greedy_ok = placed;
  }
  if (greedy_ok) return out;

  // some user cannot be placed greedily: feasibility solve on the full LP
  std::vector<double> unit_costs(m, 1.0);
  const AssignmentLP lp = build_lp(link, topo.capacities_hz(), unit_costs);
  const LPSolution sol = find_feasible_point(lp);
  if (sol.status == LPStatus::infeasible) {
    throw InfeasibleError("no feasible assignment exists for this instance");
  }
  return scatter_solution(lp, sol);
}

RelaxedAssignment mm_step(const RelaxedAssignment& w, const LinkMatrix& link,
                          std::span<const double> capacities_hz, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be > 0");
  const auto loads = row_sums(w.w, w.num_stations, w.num_users);
  const auto costs = station_costs_from_loads(loads, epsilon);
  const AssignmentLP lp = build_lp(link, capacities_hz, costs);
  const LPSolution sol = solve(lp);
  if (sol.status == LPStatus::infeasible) {
    throw InfeasibleError("reweighting step found the instance infeasible");
  }
  return scatter_solution(lp, sol);
}

bool has_converged(double f_prev, double f_curr, double epsilon_star) {
  return f_prev - f_curr < epsilon_star;
}

std::pair<RelaxedAssignment, SolveTrace> run(const LinkMatrix& link,
                                             const NetworkTopology& topo,
                                             const UserSnapshot& users,
                                             const MMConfig& cfg) {
  cfg.validate();
  const std::size_t m = link.num_stations;
  const std::size_t n = link.num_users;

  RelaxedAssignment current = initialize(link, topo, users);

  SolveTrace trace;
  trace.objective_per_iter.push_back(objective(current.w, cfg.epsilon, m, n));
  trace.active_count_per_iter.push_back(count_active(current.w, m, n));
  if (cfg.keep_iterates) trace.w_per_iter.push_back(current.w);

  // The constraint set is identical in every step; only the costs move.
  // Build the LP once and re-optimize from the previous basis.
  std::vector<double> unit_costs(m, 1.0);
  SimplexSolver solver(build_lp(link, topo.capacities_hz(), unit_costs));
  bool first_solve = true;

  trace.termination_reason = TerminationReason::max_iters;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const auto loads = row_sums(current.w, m, n);
    const auto station_costs = station_costs_from_loads(loads, cfg.epsilon);
    const auto var_costs = gather_variable_costs(solver.lp(), station_costs);

    LPSolution sol;
    if (first_solve) {
      AssignmentLP lp = solver.lp();
      lp.cost = var_costs;
      solver = SimplexSolver(std::move(lp));
      sol = solver.solve();
      first_solve = false;
    } else {
      sol = solver.resolve(var_costs);
    }
    if (sol.status == LPStatus::infeasible) {
      throw InfeasibleError("reweighting step found the instance infeasible");
    }
    current = scatter_solution(solver.lp(), sol);

    const double f = objective(current.w, cfg.epsilon, m, n);
    trace.objective_per_iter.push_back(f);
    trace.active_count_per_iter.push_back(count_active(current.w, m, n));
    if (cfg.keep_iterates) trace.w_per_iter.push_back(current.w);
    trace.iterations_used = iter;

    const double f_prev = trace.objective_per_iter[trace.objective_per_iter.size() - 2];
    if (has_converged(f_prev, f, cfg.epsilon_star)) {
      trace.termination_reason = TerminationReason::tolerance;
      break;
    }
  }
  return {std::move(current), std::move(trace)};
}

double l0_relaxation_value(std::span<const double> h, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be > 0");
  const double denom = std::log1p(1.0 / epsilon);
  double total = 0.0;
  for (double v : h) total += std::log1p(std::abs(v) / epsilon);
  return total / denom;
}

}  // namespace greencell
