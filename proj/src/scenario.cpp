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

#include "greencell/scenario.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "greencell/errors.hpp"

namespace greencell {

namespace {

double fold_onto(double v, double period) {
  // maps any real onto [0, period)
  double r = std::fmod(v, period);
  if (r < 0.0) r += period;
  return r;
}

}  // namespace

std::vector<double> NetworkTopology::capacities_hz() const {
  std::vector<double> out;
  out.reserve(stations.size());
  for (const auto& s : stations) out.push_back(s.bandwidth_hz);
  return out;
}

std::vector<double> NetworkTopology::static_powers_w() const {
  std::vector<double> out;
  out.reserve(stations.size());
  for (const auto& s : stations) out.push_back(s.static_power_w);
  return out;
}

void NetworkTopology::validate() const {
  if (extent_m.x <= 0.0 || extent_m.y <= 0.0) {
    throw InvalidInputError("topology extent must be positive");
  }
  for (const auto& s : stations) {
    if (!(s.bandwidth_hz > 0.0)) {
      throw InvalidInputError("station bandwidth must be > 0");
    }
    if (!(s.static_power_w > 0.0)) {
      throw InvalidInputError("station static power must be > 0");
    }
    if (s.position_m.x < 0.0 || s.position_m.x >= extent_m.x ||
        s.position_m.y < 0.0 || s.position_m.y >= extent_m.y) {
      throw InvalidInputError("station position outside [0, extent)");
    }
  }
}

std::vector<double> UserSnapshot::rates_bps() const {
  std::vector<double> out;
  out.reserve(users.size());
  for (const auto& u : users) out.push_back(u.rate_bps);
  return out;
}

void HotspotSpec::validate() const {
  if (count < 0) throw InvalidInputError("hotspot count must be >= 0");
  if (count > 0) {
    if (!(radius_m > 0.0)) throw InvalidInputError("hotspot radius must be > 0");
    if (!(position_sigma_m > 0.0)) {
      throw InvalidInputError("hotspot position sigma must be > 0");
    }
    if (drop_probability < 0.0 || drop_probability > 1.0) {
      throw InvalidInputError("hotspot drop probability must be in [0,1]");
    }
    if (count * drop_probability > 1.0) {
      throw InvalidInputError("count * drop_probability must be <= 1");
    }
    if (!centers.empty() && static_cast<int>(centers.size()) != count) {
      throw InvalidInputError("fixed hotspot centers must match count");
    }
  }
}

NetworkTopology generate_hex_grid(int rows, int cols, double spacing_m,
                                  double bandwidth_hz, double static_power_w) {
  if (rows < 1 || cols < 1) throw InvalidInputError("grid needs rows, cols >= 1");
  if (!(spacing_m > 0.0)) throw InvalidInputError("grid spacing must be > 0");

  const double row_pitch = spacing_m * std::sqrt(3.0) / 2.0;
  NetworkTopology topo;
  topo.extent_m = {cols * spacing_m, rows * row_pitch};
  topo.stations.reserve(static_cast<std::size_t>(rows) * cols);
  int id = 0;
  for (int r = 0; r < rows; ++r) {
    const double x_off = (r % 2 == 1) ? spacing_m / 2.0 : 0.0;
    for (int c = 0; c < cols; ++c) {
      Station s;
      s.id = id++;
      s.position_m = {c * spacing_m + x_off, r * row_pitch};
      s.bandwidth_hz = bandwidth_hz;
      s.static_power_w = static_power_w;
      topo.stations.push_back(s);
    }
  }
  topo.validate();
  return topo;
}

double wrap_distance(Vec2 a, Vec2 b, Vec2 extent_m) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  dx = std::min(dx, extent_m.x - dx);
  dy = std::min(dy, extent_m.y - dy);
  return std::hypot(dx, dy);
}

double euclidean_distance(Vec2 a, Vec2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a simple combination
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (a + 1) +
                    0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

UserSnapshot sample_users(std::uint64_t seed, double mean_user_count,
                          double rate_bps, const HotspotSpec& hotspots,
                          Vec2 extent_m) {
  if (!(mean_user_count > 0.0)) {
    throw InvalidInputError("mean user count must be > 0");
  }
  if (!(rate_bps > 0.0)) throw InvalidInputError("user rate must be > 0");
  hotspots.validate();

  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> user_count(mean_user_count);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int n = user_count(rng);

  // hotspot centers: fixed when configured, else uniform per snapshot
  std::vector<Vec2> centers = hotspots.centers;
  if (hotspots.count > 0 && centers.empty()) {
    centers.reserve(hotspots.count);
    for (int h = 0; h < hotspots.count; ++h) {
      centers.push_back({unit(rng) * extent_m.x, unit(rng) * extent_m.y});
    }
  }

  const double p_any_hotspot = hotspots.count * hotspots.drop_probability;

  UserSnapshot snap;
  snap.users.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    User u;
    u.id = j;
    u.rate_bps = rate_bps;
    if (hotspots.count > 0 && unit(rng) < p_any_hotspot) {
      auto h = static_cast<int>(unit(rng) * hotspots.count);
      if (h >= hotspots.count) h = hotspots.count - 1;
      const Vec2& c = centers[static_cast<std::size_t>(h)];
      u.position_m = {
          fold_onto(c.x + gauss(rng) * hotspots.position_sigma_m, extent_m.x),
          fold_onto(c.y + gauss(rng) * hotspots.position_sigma_m, extent_m.y)};
    } else {
      u.position_m = {unit(rng) * extent_m.x, unit(rng) * extent_m.y};
    }
    snap.users.push_back(u);
  }
  return snap;
}

std::vector<double> sample_shadow_db(std::uint64_t seed, std::size_t num_stations,
                                     std::size_t num_users, double sigma_db) {
  if (sigma_db < 0.0) throw InvalidInputError("shadow sigma must be >= 0");
  std::vector<double> shadow(num_stations * num_users, 0.0);
  if (sigma_db == 0.0) return shadow;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma_db);
  for (double& v : shadow) v = gauss(rng);
  return shadow;
}

void write_topology(std::ostream& os, const NetworkTopology& topo) {
  os.precision(17);
  os << "# extent " << topo.extent_m.x << ' ' << topo.extent_m.y << '\n';
  os << "# station: id x_m y_m bandwidth_hz static_power_w\n";
  for (const auto& s : topo.stations) {
    os << s.id << ' ' << s.position_m.x << ' ' << s.position_m.y << ' '
       << s.bandwidth_hz << ' ' << s.static_power_w << '\n';
  }
}

NetworkTopology read_topology(std::istream& is) {
  NetworkTopology topo;
  bool have_extent = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string tag;
      if (ls >> tag && tag == "extent") {
        if (!(ls >> topo.extent_m.x >> topo.extent_m.y)) {
          throw InvalidInputError("malformed extent line in topology file");
        }
        have_extent = true;
      }
      continue;
    }
    std::istringstream ls(line);
    Station s;
    if (!(ls >> s.id >> s.position_m.x >> s.position_m.y >> s.bandwidth_hz >>
          s.static_power_w)) {
      throw InvalidInputError("malformed station record: " + line);
    }
    topo.stations.push_back(s);
  }
  if (!have_extent) throw InvalidInputError("topology file lacks extent header");
  topo.validate();
  return topo;
}

void write_users(std::ostream& os, const UserSnapshot& users) {
  os.precision(17);
  os << "# user: id x_m y_m rate_bps\n";
  for (const auto& u : users.users) {
    os << u.id << ' ' << u.position_m.x << ' ' << u.position_m.y << ' '
       << u.rate_bps << '\n';
  }
}

UserSnapshot read_users(std::istream& is) {
  UserSnapshot snap;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    User u;
    if (!(ls >> u.id >> u.position_m.x >> u.position_m.y >> u.rate_bps)) {
      throw InvalidInputError("malformed user record: " + line);
    }
    if (!(u.rate_bps > 0.0)) throw InvalidInputError("user rate must be > 0");
    snap.users.push_back(u);
  }
  return snap;
}

}  // namespace greencell
