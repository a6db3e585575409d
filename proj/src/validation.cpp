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

#include "greencell/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "greencell/errors.hpp"
#include "greencell/radio.hpp"

namespace greencell::validation {

namespace {

constexpr double kVertexFeasTol = 1e-9;

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& pick, std::size_t n) {
  const std::size_t k = pick.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (pick[i] != i + n - k) {
      ++pick[i];
      for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// Returns false when the system is numerically singular.
bool gauss_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[col * n + r]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-11) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[c * n + col], a[c * n + pivot]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[col * n + r] * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[c * n + r] -= f * a[c * n + col];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    double v = b[col];
    for (std::size_t c = col + 1; c < n; ++c) v -= a[c * n + col] * b[c];
    b[col] = v / a[col * n + col];
  }
  return true;
}

}  // namespace

std::vector<double> objective_fd_gradient(std::span<const double> w, double epsilon,
                                          std::size_t num_stations,
                                          std::size_t num_users, double step) {
  std::vector<double> probe(w.begin(), w.end());
  std::vector<double> grad(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double saved = probe[k];
    probe[k] = saved + step;
    const double fp = objective(probe, epsilon, num_stations, num_users);
    probe[k] = saved - step;
    const double fm = objective(probe, epsilon, num_stations, num_users);
    probe[k] = saved;
    grad[k] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

VertexEnumResult lp_optimum_by_vertex_enumeration(const AssignmentLP& lp) {
  lp.validate();
  const std::size_t nv = lp.num_vars();
  if (nv > 10) {
    throw SizeLimitError("vertex enumeration handles at most 10 variables");
  }
  const std::size_t num_users = lp.num_users;
  const std::size_t num_stations = lp.num_stations;

  // candidate extra constraints beyond the always-active user equalities:
  // capacity rows (as equalities) and the two bounds of every variable
  struct Candidate {
    enum Kind { capacity, lower, upper } kind;
    std::size_t index;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < num_stations; ++i) {
    candidates.push_back({Candidate::capacity, i});
  }
  for (std::size_t v = 0; v < nv; ++v) {
    candidates.push_back({Candidate::lower, v});
    candidates.push_back({Candidate::upper, v});
  }

  if (nv < num_users) {
    return {LPStatus::infeasible, 0.0};  // cannot satisfy all equalities
  }
  const std::size_t extra = nv - num_users;

  VertexEnumResult result;
  result.status = LPStatus::infeasible;
  result.objective = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> pick(extra);
  std::vector<double> a(nv * nv);
  std::vector<double> rhs(nv);

  auto evaluate = [&]() {
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(rhs.begin(), rhs.end(), 0.0);
    std::size_t row = 0;
    for (std::size_t j = 0; j < num_users; ++j, ++row) {
      for (std::size_t v = 0; v < nv; ++v) {
        if (static_cast<std::size_t>(lp.var_user[v]) == j) a[v * nv + row] = 1.0;
      }
      rhs[row] = 1.0;
    }
    for (std::size_t k = 0; k < extra; ++k, ++row) {
      const Candidate& c = candidates[pick[k]];
      switch (c.kind) {
        case Candidate::capacity:
          for (std::size_t v = 0; v < nv; ++v) {
            if (static_cast<std::size_t>(lp.var_station[v]) == c.index) {
              a[v * nv + row] = lp.demand_hz[v] / lp.capacity_hz[c.index];
            }
          }
          rhs[row] = 1.0;
          break;
        case Candidate::lower:
          a[c.index * nv + row] = 1.0;
          rhs[row] = 0.0;
          break;
        case Candidate::upper:
          a[c.index * nv + row] = 1.0;
          rhs[row] = 1.0;
          break;
      }
    }
    std::vector<double> mat = a;
    std::vector<double> x = rhs;
    if (!gauss_solve(mat, x, nv)) return;

    for (std::size_t v = 0; v < nv; ++v) {
      if (x[v] < -kVertexFeasTol || x[v] > 1.0 + kVertexFeasTol) return;
    }
    std::vector<double> user_sum(num_users, 0.0);
    std::vector<double> cap_sum(num_stations, 0.0);
    for (std::size_t v = 0; v < nv; ++v) {
      user_sum[static_cast<std::size_t>(lp.var_user[v])] += x[v];
      const auto i = static_cast<std::size_t>(lp.var_station[v]);
      cap_sum[i] += x[v] * lp.demand_hz[v] / lp.capacity_hz[i];
    }
    for (std::size_t j = 0; j < num_users; ++j) {
      if (std::abs(user_sum[j] - 1.0) > kVertexFeasTol) return;
    }
    for (std::size_t i = 0; i < num_stations; ++i) {
      if (cap_sum[i] > 1.0 + kVertexFeasTol) return;
    }
    double obj = 0.0;
    for (std::size_t v = 0; v < nv; ++v) obj += lp.cost[v] * x[v];
    if (obj < result.objective) {
      result.objective = obj;
      result.status = LPStatus::optimal;
    }
  };

  if (extra == 0) {
    evaluate();
    return result;
  }
  for (std::size_t k = 0; k < extra; ++k) pick[k] = k;
  do {
    evaluate();
  } while (next_combination(pick, candidates.size()));
  return result;
}

AssignmentLP random_assignment_lp(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> demand_dist(0.3, 1.5);
  std::uniform_real_distribution<double> cost_dist(0.1, 3.0);

  const int m = m_dist(rng);
  const int max_users = std::max(1, 8 / m);
  const int n = std::uniform_int_distribution<int>(1, std::min(4, max_users))(rng);

  AssignmentLP lp;
  lp.num_stations = static_cast<std::size_t>(m);
  lp.num_users = static_cast<std::size_t>(n);
  lp.var_of_link.assign(static_cast<std::size_t>(m * n), -1);
  for (int j = 0; j < n; ++j) {
    const int forced = std::uniform_int_distribution<int>(0, m - 1)(rng);
    for (int i = 0; i < m; ++i) {
      if (i != forced && unit(rng) > 0.85) continue;  // drop some links
      lp.var_of_link[static_cast<std::size_t>(i + m * j)] =
          static_cast<std::int32_t>(lp.cost.size());
      lp.cost.push_back(cost_dist(rng));
      lp.demand_hz.push_back(demand_dist(rng));
      lp.var_station.push_back(i);
      lp.var_user.push_back(j);
    }
  }
  // capacities around the per-station share of total demand; some
  // instances come out infeasible on purpose
  const double total_demand = [&] {
    double t = 0.0;
    for (double d : lp.demand_hz) t += d;
    return t;
  }();
  const double share = total_demand / static_cast<double>(m * std::max(n, 1));
  for (int i = 0; i < m; ++i) {
    lp.capacity_hz.push_back(share * std::uniform_real_distribution<double>(0.4, 2.5)(rng) +
                             0.05);
  }
  lp.validate();
  return lp;
}

SyntheticInstance random_instance(std::uint64_t seed, std::size_t num_stations,
                                  std::size_t num_users, double tightness) {
  if (!(tightness > 1.0)) throw InvalidInputError("tightness must exceed 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double side =
      1000.0 * std::ceil(std::sqrt(static_cast<double>(num_stations)));

  SyntheticInstance inst;
  inst.topo.extent_m = {side, side};
  for (std::size_t i = 0; i < num_stations; ++i) {
    Station s;
    s.id = static_cast<int>(i);
    s.position_m = {unit(rng) * side, unit(rng) * side};
    s.bandwidth_hz = 5e6;  // provisional, fixed below
    s.static_power_w = 400.0;
    inst.topo.stations.push_back(s);
  }
  for (std::size_t j = 0; j < num_users; ++j) {
    User u;
    u.id = static_cast<int>(j);
    u.position_m = {unit(rng) * side, unit(rng) * side};
    u.rate_bps = 122000.0;
    inst.users.users.push_back(u);
  }

  RadioConfig radio;  // defaults
  const auto shadow =
      sample_shadow_db(derive_seed(seed, 2), num_stations, num_users,
                       radio.shadow_sigma_db);

  // Grow the common bandwidth until the capacity-free nearest-station
  // assignment fits with the requested margin. That assignment is then an
  // explicit feasibility witness.
  double bandwidth = 5e6;
  for (int guard = 0;; ++guard) {
    for (auto& s : inst.topo.stations) s.bandwidth_hz = bandwidth;
    inst.link = build_link_matrix(inst.topo, inst.users, radio, shadow);
    std::vector<double> load(num_stations, 0.0);
    for (std::size_t j = 0; j < num_users; ++j) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < num_stations; ++i) {
        const double d = wrap_distance(inst.topo.stations[i].position_m,
                                       inst.users.users[j].position_m,
                                       inst.topo.extent_m);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      load[best] += inst.link.demand(best, j);
    }
    const double max_load = *std::max_element(load.begin(), load.end());
    if (max_load * tightness <= bandwidth) break;
    if (guard > 60) {
      throw SolverFailureError("instance generator failed to stabilize capacity");
    }
    bandwidth = max_load * tightness;
  }
  return inst;
}

std::vector<double> random_l0_vector(std::uint64_t seed, std::size_t* nonzeros) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(6, 14);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int dim = dim_dist(rng);
  const int k = std::uniform_int_distribution<int>(3, std::min(7, dim))(rng);

  // Keep |sum of log magnitudes| inside [1, k]: large enough that the
  // counting error shrinks strictly along the epsilon ladder, small enough
  // that the limiting error stays below 5% of the support size.
  std::vector<double> magnitudes(static_cast<std::size_t>(k));
  const double lo = std::log(0.1), hi = std::log(10.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double log_mass = 0.0;
    for (auto& v : magnitudes) {
      const double lg = lo + unit(rng) * (hi - lo);
      v = std::exp(lg);
      log_mass += lg;
    }
    if (std::abs(log_mass) >= 1.0 && std::abs(log_mass) <= static_cast<double>(k)) {
      break;
    }
  }

  std::vector<double> h(static_cast<std::size_t>(dim), 0.0);
  std::vector<std::size_t> slots(h.size());
  for (std::size_t s = 0; s < slots.size(); ++s) slots[s] = s;
  std::shuffle(slots.begin(), slots.end(), rng);
  for (int t = 0; t < k; ++t) {
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    h[slots[static_cast<std::size_t>(t)]] = sign * magnitudes[static_cast<std::size_t>(t)];
  }
  if (nonzeros != nullptr) *nonzeros = static_cast<std::size_t>(k);
  return h;
}

namespace {

CheckResult check_gradient(const SuiteOptions& opt) {
  CheckResult res{"gradient_finite_difference", true, ""};
  const double tol = 1e-6 * opt.tolerance_scale;
  std::mt19937_64 rng(derive_seed(opt.seed, 11));
  std::uniform_real_distribution<double> interior(0.05, 0.95);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 4;
    const std::size_t n = 3 + trial % 5;
    std::vector<double> w(m * n);
    for (auto& v : w) v = interior(rng);
    const double eps = 1e-3;
    auto analytic = gradient(w, eps, m, n);
    if (opt.corrupt_gradient) analytic[0] += 1e-3 * (1.0 + std::abs(analytic[0]));
    const auto numeric = objective_fd_gradient(w, eps, m, n, 1e-6);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double rel =
          std::abs(analytic[k] - numeric[k]) / std::max(std::abs(numeric[k]), 1e-12);
      worst = std::max(worst, rel);
    }
  }
  res.pass = worst < tol;
  std::ostringstream oss;
  oss << "max relative error " << worst << " (tolerance " << tol << ")";
  res.detail = oss.str();
  return res;
}

CheckResult check_monotone_descent(const SuiteOptions& opt) {
  CheckResult res{"monotone_descent", true, ""};
  const double slack = 1e-8 * opt.tolerance_scale;
  double worst = -std::numeric_limits<double>::infinity();
  int instances = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 2 + trial % 6;
    const std::size_t n = 4 + (trial * 3) % 12;
    const auto inst = random_instance(derive_seed(opt.seed, 21, trial), m, n,
                                      1.15 + 0.1 * (trial % 4));
    MMConfig cfg;
    const auto [w, trace] = run(inst.link, inst.topo, inst.users, cfg);
    (void)w;
    for (std::size_t t = 1; t < trace.objective_per_iter.size(); ++t) {
      worst = std::max(worst,
                       trace.objective_per_iter[t] - trace.objective_per_iter[t - 1]);
    }
    ++instances;
  }
  res.pass = worst <= slack;
  std::ostringstream oss;
  oss << "largest objective increase " << worst << " over " << instances
      << " instances (slack " << slack << ")";
  res.detail = oss.str();
  return res;
}

CheckResult check_lp_oracle(const SuiteOptions& opt) {
  CheckResult res{"lp_vertex_oracle", true, ""};
  const double tol = 1e-7 * opt.tolerance_scale;
  double worst = 0.0;
  int disagreements = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const AssignmentLP lp = random_assignment_lp(derive_seed(opt.seed, 31, trial));
    const LPSolution sol = solve(lp);
    const VertexEnumResult oracle = lp_optimum_by_vertex_enumeration(lp);
    if ((sol.status == LPStatus::optimal) != (oracle.status == LPStatus::optimal)) {
      ++disagreements;
      continue;
    }
    if (sol.status == LPStatus::optimal) {
      worst = std::max(worst, std::abs(sol.objective - oracle.objective));
    }
  }
  res.pass = disagreements == 0 && worst <= tol;
  std::ostringstream oss;
  oss << disagreements << " status disagreements, max objective gap " << worst
      << " (tolerance " << tol << ")";
  res.detail = oss.str();
  return res;
}

CheckResult check_l0_limit(const SuiteOptions& opt) {
  CheckResult res{"l0_relaxation_limit", true, ""};
  const double eps_ladder[] = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  bool ok = true;
  double worst_final = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t k = 0;
    const auto h = random_l0_vector(derive_seed(opt.seed, 41, trial), &k);
    double prev = std::numeric_limits<double>::infinity();
    double final_err = 0.0;
    for (double eps : eps_ladder) {
      const double err =
          std::abs(l0_relaxation_value(h, eps) - static_cast<double>(k));
      if (err >= prev) ok = false;
      prev = err;
      final_err = err;
    }
    const double bound = 0.05 * static_cast<double>(k) + 1e-6;
    if (final_err >= bound) ok = false;
    worst_final = std::max(worst_final, final_err / bound);
  }
  res.pass = ok;
  std::ostringstream oss;
  oss << "worst final error at " << worst_final
      << " of the allowed bound; decrease strict: " << (ok ? "yes" : "no");
  res.detail = oss.str();
  return res;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(check_gradient(options));
  results.push_back(check_monotone_descent(options));
  results.push_back(check_lp_oracle(options));
  results.push_back(check_l0_limit(options));
  return results;
}

}  // namespace greencell::validation
