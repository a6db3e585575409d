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

#ifndef GREENCELL_SCENARIO_HPP
#define GREENCELL_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace greencell {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Station {
  int id = 0;
  Vec2 position_m;
  double bandwidth_hz = 0.0;     // B_i
  double static_power_w = 0.0;   // c_i
};

/// Base-station deployment on a rectangular torus. Positions live in
/// [0, extent.x) x [0, extent.y); distances wrap around both axes.
struct NetworkTopology {
  std::vector<Station> stations;
  Vec2 extent_m;

  std::size_t size() const { return stations.size(); }
  std::vector<double> capacities_hz() const;
  std::vector<double> static_powers_w() const;
  void validate() const;  // throws InvalidInputError on a broken invariant
};

struct User {
  int id = 0;
  Vec2 position_m;
  double rate_bps = 0.0;  // r_j
};

struct UserSnapshot {
  std::vector<User> users;

  std::size_t size() const { return users.size(); }
  std::vector<double> rates_bps() const;
};

/// Circular high-density regions; a new user lands in some hotspot with
/// probability count * drop_probability, else uniformly over the torus.
struct HotspotSpec {
  int count = 0;
  double radius_m = 500.0;
  double drop_probability = 0.05;  // per hotspot
  double position_sigma_m = 250.0;
  /// Optional fixed centers (size == count). Empty means: draw centers
  /// uniformly at random per snapshot.
  std::vector<Vec2> centers;

  void validate() const;
};

/// rows x cols stations on a hexagonal lattice: odd rows shifted by
/// spacing/2, row pitch spacing*sqrt(3)/2. The extent equals the lattice
/// periods, so the wrap-around tiling is seamless.
NetworkTopology generate_hex_grid(int rows, int cols, double spacing_m,
                                  double bandwidth_hz, double static_power_w);

/// Euclidean distance on the torus: per axis, delta = min(|d|, extent-|d|).
double wrap_distance(Vec2 a, Vec2 b, Vec2 extent_m);

/// Distance ignoring the wrap (plain Euclidean).
double euclidean_distance(Vec2 a, Vec2 b);

/// Draws one user snapshot: Poisson(mean_user_count) users, each placed in
/// a hotspot (Gaussian around the center, folded onto the torus) or
/// uniformly. All users share rate_bps. Fully determined by the seed.
UserSnapshot sample_users(std::uint64_t seed, double mean_user_count,
                          double rate_bps, const HotspotSpec& hotspots,
                          Vec2 extent_m);

/// One shadow-fading value per (station, user) link, Gaussian with the
/// given std deviation in dB, column-major (index i + M*j).
std::vector<double> sample_shadow_db(std::uint64_t seed, std::size_t num_stations,
                                     std::size_t num_users, double sigma_db);

/// Derives an independent stream seed from a master seed and stream labels
/// (splitmix64 mixing); used to keep realizations and draws decoupled.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Plain-text round-trip format, one record per line:
//   topology: "id x_m y_m bandwidth_hz static_power_w"
//             preceded by "# extent <x> <y>"
//   users:    "id x_m y_m rate_bps"
void write_topology(std::ostream& os, const NetworkTopology& topo);
NetworkTopology read_topology(std::istream& is);
void write_users(std::ostream& os, const UserSnapshot& users);
UserSnapshot read_users(std::istream& is);

}  // namespace greencell

#endif  // GREENCELL_SCENARIO_HPP
