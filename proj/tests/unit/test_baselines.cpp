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

#include <doctest.h>

#include <cmath>

#include "greencell/baselines.hpp"
#include "greencell/errors.hpp"
#include "greencell/mm.hpp"
#include "greencell/validation.hpp"
#include "support/builders.hpp"

using namespace greencell;

TEST_SUITE_BEGIN("baselines");

TEST_CASE("exhaustive optimum on trivial instances") {
  // either station alone can host both users: optimum 1
  auto link = test_support::link_from_demands(2, 2, {{1.0, 1.0}, {1.0, 1.0}});
  const std::vector<double> roomy{3.0, 3.0};
  const auto one = brute_force_optimum(link, roomy);
  CHECK(one.min_active_count == 1);
  CHECK(one.assignment.active_count() == 1);

  // each station fits exactly one user: optimum 2
  const std::vector<double> tight{1.0, 1.0};
  const auto two = brute_force_optimum(link, tight);
  CHECK(two.min_active_count == 2);

  // nothing fits anywhere
  const std::vector<double> hopeless{0.5, 0.5};
  CHECK_THROWS_AS(brute_force_optimum(link, hopeless), InfeasibleError);
}

TEST_CASE("exhaustive oracle refuses big instances") {
  const auto big = test_support::link_from_demands(
      7, 2, {{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  CHECK_THROWS_AS(brute_force_optimum(big, std::vector<double>(7, 5.0)),
                  SizeLimitError);
  const auto many_users = test_support::link_from_demands(
      2, 11, {std::vector<double>(11, 1.0), std::vector<double>(11, 1.0)});
  CHECK_THROWS_AS(brute_force_optimum(many_users, std::vector<double>(2, 50.0)),
                  SizeLimitError);
}

TEST_CASE("exhaustive optimum agrees with flat 0/1-matrix enumeration") {
  // independent oracle: enumerate every 0/1 assignment matrix (as the bits
  // of one integer), filter by the one-station-per-user and bandwidth
  // constraints, track the best row support
  const auto inst = validation::random_instance(1234, 4, 6, 1.2);
  const auto caps = inst.topo.capacities_hz();
  const std::size_t m = 4, n = 6;

  int best = static_cast<int>(m) + 1;
  const std::uint32_t total = 1u << (m * n);
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    bool one_per_user = true;
    for (std::size_t j = 0; j < n && one_per_user; ++j) {
      const std::uint32_t column = (bits >> (m * j)) & 0xFu;
      one_per_user = column != 0 && (column & (column - 1)) == 0;
    }
    if (!one_per_user) continue;
    std::vector<double> load(m, 0.0);
    std::uint32_t support = 0;
    bool fits = true;
    for (std::size_t j = 0; j < n && fits; ++j) {
      const std::uint32_t column = (bits >> (m * j)) & 0xFu;
      const auto i = static_cast<std::size_t>(std::countr_zero(column));
      load[i] += inst.link.demand(i, j);
      fits = load[i] <= caps[i];
      support |= 1u << i;
    }
    if (fits) best = std::min(best, static_cast<int>(std::popcount(support)));
  }
  REQUIRE(best <= static_cast<int>(m));

  const auto brute = brute_force_optimum(inst.link, caps);
  CHECK(brute.min_active_count == best);
}

TEST_CASE("nearest-station baseline mirrors the greedy initializer") {
  const auto topo = test_support::line_topology(2, 500.0, 10.0, 400.0);
  const auto users = test_support::users_at({{100.0, 250.0}, {150.0, 250.0}});
  const auto link = test_support::link_from_demands(2, 2, {{4.0, 4.0}, {5.0, 5.0}});

  const auto all_near = nearest_station_solution(link, topo, users);
  CHECK(all_near.assigned_station[0] == 0);
  CHECK(all_near.assigned_station[1] == 0);
  CHECK(all_near.active_count() == 1);

  // saturate station 0: the second user spills to the next nearest
  auto tight = topo;
  tight.stations[0].bandwidth_hz = 6.0;
  const auto spilled = nearest_station_solution(link, tight, users);
  CHECK(spilled.assigned_station[0] == 0);
  CHECK(spilled.assigned_station[1] == 1);

  // no station can host the second user at all
  auto hopeless = topo;
  hopeless.stations[0].bandwidth_hz = 6.0;
  hopeless.stations[1].bandwidth_hz = 2.0;
  CHECK_THROWS_AS(nearest_station_solution(link, hopeless, users), InfeasibleError);
}

TEST_CASE("greedy switch-off consolidates two half-loaded stations") {
  const auto topo = test_support::line_topology(2, 500.0, 10.0, 400.0);
  const auto users = test_support::users_at({{100.0, 250.0}, {600.0, 250.0}});
  const auto link = test_support::link_from_demands(2, 2, {{4.0, 4.0}, {4.0, 4.0}});
  // nearest puts one user on each station; combined load (8) fits either
  const auto out = greedy_switchoff(link, topo, users);
  CHECK(out.active_count() == 1);
}

TEST_CASE("greedy switch-off walks a 3x6 instance as hand-traced") {
  // stations at x = 125, 625, 1125; users clustered so nearest yields two
  // users (load 2.0) per station, capacity 10. Hand trace: station 0
  // (first among equal loads) empties into station 1 (omega preference
  // below), then station 2 empties into station 1 as well.
  const auto topo = test_support::line_topology(3, 500.0, 10.0, 400.0);
  const auto users = test_support::users_at({{100.0, 250.0},
                                             {150.0, 250.0},
                                             {600.0, 250.0},
                                             {650.0, 250.0},
                                             {1100.0, 250.0},
                                             {1150.0, 250.0}});
  // demand 1.0 everywhere; omega favors station 1 for everyone via rate/b
  std::vector<std::vector<double>> demands(3, std::vector<double>(6, 1.0));
  auto link = test_support::link_from_demands(3, 6, demands);
  // make station 1 the best radio for every user, then station 2, then 0
  for (std::size_t j = 0; j < 6; ++j) {
    link.spec_eff[link.idx(0, j)] = 1.0;
    link.spec_eff[link.idx(1, j)] = 3.0;
    link.spec_eff[link.idx(2, j)] = 2.0;
  }
  const auto out = greedy_switchoff(link, topo, users);
  CHECK(out.active_count() == 1);
  for (auto s : out.assigned_station) CHECK(s == 1);

  // with capacity 4 only one station can be emptied: loads 2/2/2, first
  // candidate (station 0) moves into station 1 (load 4), station 2 cannot
  // move anywhere (1 has no room, 0 is no longer active... station 2's
  // users go to station 1? full) so two stations remain
  auto smaller = topo;
  for (auto& s : smaller.stations) s.bandwidth_hz = 4.0;
  const auto out2 = greedy_switchoff(link, smaller, users);
  CHECK(out2.active_count() == 2);
}

TEST_CASE("greedy switch-off never loses to its starting point") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst =
        validation::random_instance(seed + 500, 4 + seed % 3, 5 + seed % 6, 1.25);
    const auto start = nearest_station_solution(inst.link, inst.topo, inst.users);
    const auto improved = greedy_switchoff(inst.link, inst.topo, inst.users);
    CHECK(improved.active_count() <= start.active_count());
  }
}

TEST_CASE("exhaustive optimum lower-bounds every other solver") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst =
        validation::random_instance(seed * 31 + 7, 3 + seed % 3, 4 + seed % 5, 1.2);
    const auto caps = inst.topo.capacities_hz();
    const auto brute = brute_force_optimum(inst.link, caps);

    const auto nearest = nearest_station_solution(inst.link, inst.topo, inst.users);
    CHECK(brute.min_active_count <= nearest.active_count());

    const auto greedy = greedy_switchoff(inst.link, inst.topo, inst.users);
    CHECK(brute.min_active_count <= greedy.active_count());

    const auto [w, trace] = run(inst.link, inst.topo, inst.users, MMConfig{});
    (void)trace;
    const auto rounded = round_assignment(w, inst.link, inst.topo, inst.users);
    CHECK(brute.min_active_count <= rounded.active_count());
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_SUITE_END();
