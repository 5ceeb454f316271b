#pragma once

// Top-down analogue of a first-person shooter. The player explores a walled
// single-floor map and shoots 25 stationary turrets within the clock. Dead
// turrets stay dead; the player respawns at the spawn point.
//
// World units: x, y on the floor plane, z up. Yaw is counter-clockwise from
// +x, pitch is positive upward.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affectively/core/errors.hpp"
#include "affectively/core/game.hpp"
#include "affectively/core/rng.hpp"
#include "affectively/core/spaces.hpp"

namespace affectively::heist {

inline constexpr int kIdObscured = 0;
inline constexpr int kIdEmpty = 1;
inline constexpr int kIdObstacle = 2;
inline constexpr int kIdEnemy = 3;
inline constexpr int kIdCount = 4;

inline constexpr int kGridSize = 9;
inline constexpr int kPropertyCount = 20;
inline constexpr int kEnemyCount = 25;
inline constexpr int kMagazine = 11;

struct RewardParams {
  double kill_value = 20.0;
  double exploration_bonus = 1.0;
  double max_score = 500.0;
  double cube_edge = 5.0;
};

struct Params {
  double move_speed = 5.0;                            // units/s
  double turn_rate = std::numbers::pi / 2.0;          // rad/s at full deflection
  double max_pitch = std::numbers::pi / 120.0;        // 1.5 degrees; every turret is at eye level
  double player_radius = 0.3;
  int player_health = 100;
  double reload_seconds = 2.0;
  double hit_tolerance = 2.0 * std::numbers::pi / 180.0;
  double turret_interval = 1.0;                       // seconds between shots
  int turret_damage = 10;
  double turret_range = 20.0;
  double fov = std::numbers::pi / 2.0;
  double grid_cell = 2.0;                             // observation cell edge
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Vec3&) const = default;
};

// Map text format, one directive per line ('#' or ';' start comments):
//   size W D H                       map extent in units (integers)
//   block x0 y0 z0 x1 y1 z1          solid box, corners snapped outward to units
//   enemy x y z                      turret position
//   spawn x y z yaw_degrees          player spawn
struct Map {
  int width = 0;
  int depth = 0;
  int height = 0;
  std::vector<std::uint8_t> solid;  // voxels, index (z * depth + y) * width + x
  std::vector<Vec3> enemies;
  Vec3 spawn;
  double spawn_yaw = 0.0;

  bool voxel(int x, int y, int z) const {
    if (x < 0 || y < 0 || x >= width || y >= depth) return true;
    if (z < 0 || z >= height) return false;
    return solid[static_cast<std::size_t>((z * depth + y) * width + x)] != 0;
  }
  // Floor-plane occupancy at body height (voxel layers 0 and 1).
  bool blocked(int x, int y) const { return voxel(x, y, 0) || voxel(x, y, 1); }
  bool blocked_at(double x, double y) const {
    return blocked(static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y)));
  }
};

inline Map parse_map(std::string_view text) {
  Map m;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool has_size = false;
  bool has_spawn = false;
  struct Block {
    double v[6];
  };
  std::vector<Block> blocks;
  auto fail = [&](const std::string& what) {
    throw FormatError("heist map line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "size") {
      if (!(ls >> m.width >> m.depth >> m.height) || m.width <= 0 || m.depth <= 0 || m.height <= 0) {
        fail("size expects three positive integers");
      }
      has_size = true;
    } else if (kind == "block") {
      Block b{};
      for (double& v : b.v) {
        if (!(ls >> v)) fail("block expects six numbers");
      }
      blocks.push_back(b);
    } else if (kind == "enemy") {
      Vec3 e;
      if (!(ls >> e.x >> e.y >> e.z)) fail("enemy expects three numbers");
      m.enemies.push_back(e);
    } else if (kind == "spawn") {
      double yaw_deg = 0.0;
      if (!(ls >> m.spawn.x >> m.spawn.y >> m.spawn.z >> yaw_deg)) fail("spawn expects four numbers");
      m.spawn_yaw = yaw_deg * std::numbers::pi / 180.0;
      has_spawn = true;
    } else {
      fail("unknown directive '" + kind + "'");
    }
  }
  if (!has_size) throw FormatError("heist map: missing size directive");
  if (!has_spawn) throw FormatError("heist map: missing spawn directive");
  m.solid.assign(static_cast<std::size_t>(m.width * m.depth * m.height), 0);
  for (const auto& b : blocks) {
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(b.v[0], b.v[3]))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(b.v[1], b.v[4]))));
    const int z0 = std::max(0, static_cast<int>(std::floor(std::min(b.v[2], b.v[5]))));
    const int x1 = std::min(m.width, static_cast<int>(std::ceil(std::max(b.v[0], b.v[3]))));
    const int y1 = std::min(m.depth, static_cast<int>(std::ceil(std::max(b.v[1], b.v[4]))));
    const int z1 = std::min(m.height, static_cast<int>(std::ceil(std::max(b.v[2], b.v[5]))));
    for (int z = z0; z < z1; ++z)
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.solid[static_cast<std::size_t>((z * m.depth + y) * m.width + x)] = 1;
  }
  if (m.blocked_at(m.spawn.x, m.spawn.y)) throw FormatError("heist map: spawn inside an obstacle");
  for (const auto& e : m.enemies) {
    if (m.blocked_at(e.x, e.y)) throw FormatError("heist map: enemy inside an obstacle");
  }
  return m;
}

// The shipped map: 5 x 5 rooms, 25 turrets.
inline constexpr std::string_view kDefaultMapText = R"(
; Heist map: 5 x 5 rooms of 11 x 11 units separated by 1-unit walls with 3-unit doors.
; size W D H | block x0 y0 z0 x1 y1 z1 | enemy x y z | spawn x y z yaw_degrees
size 61 61 5
block 0 0 0 1 61 5
block 0 0 0 61 1 5
block 60 0 0 61 61 5
block 0 60 0 61 61 5
block 12 1 0 13 5 5
block 12 8 0 13 12 5
block 1 12 0 5 13 5
block 8 12 0 12 13 5
block 12 13 0 13 17 5
block 12 20 0 13 24 5
block 13 12 0 17 13 5
block 20 12 0 24 13 5
block 12 25 0 13 29 5
block 12 32 0 13 36 5
block 25 12 0 29 13 5
block 32 12 0 36 13 5
block 12 37 0 13 41 5
block 12 44 0 13 48 5
block 37 12 0 41 13 5
block 44 12 0 48 13 5
block 12 49 0 13 53 5
block 12 56 0 13 60 5
block 49 12 0 53 13 5
block 56 12 0 60 13 5
block 24 1 0 25 5 5
block 24 8 0 25 12 5
block 1 24 0 5 25 5
block 8 24 0 12 25 5
block 24 13 0 25 17 5
block 24 20 0 25 24 5
block 13 24 0 17 25 5
block 20 24 0 24 25 5
block 24 25 0 25 29 5
block 24 32 0 25 36 5
block 25 24 0 29 25 5
block 32 24 0 36 25 5
block 24 37 0 25 41 5
block 24 44 0 25 48 5
block 37 24 0 41 25 5
block 44 24 0 48 25 5
block 24 49 0 25 53 5
block 24 56 0 25 60 5
block 49 24 0 53 25 5
block 56 24 0 60 25 5
block 36 1 0 37 5 5
block 36 8 0 37 12 5
block 1 36 0 5 37 5
block 8 36 0 12 37 5
block 36 13 0 37 17 5
block 36 20 0 37 24 5
block 13 36 0 17 37 5
block 20 36 0 24 37 5
block 36 25 0 37 29 5
block 36 32 0 37 36 5
block 25 36 0 29 37 5
block 32 36 0 36 37 5
block 36 37 0 37 41 5
block 36 44 0 37 48 5
block 37 36 0 41 37 5
block 44 36 0 48 37 5
block 36 49 0 37 53 5
block 36 56 0 37 60 5
block 49 36 0 53 37 5
block 56 36 0 60 37 5
block 48 1 0 49 5 5
block 48 8 0 49 12 5
block 1 48 0 5 49 5
block 8 48 0 12 49 5
block 48 13 0 49 17 5
block 48 20 0 49 24 5
block 13 48 0 17 49 5
block 20 48 0 24 49 5
block 48 25 0 49 29 5
block 48 32 0 49 36 5
block 25 48 0 29 49 5
block 32 48 0 36 49 5
block 48 37 0 49 41 5
block 48 44 0 49 48 5
block 37 48 0 41 49 5
block 44 48 0 48 49 5
block 48 49 0 49 53 5
block 48 56 0 49 60 5
block 49 48 0 53 49 5
block 56 48 0 60 49 5
block 18 18 0 20 20 5
block 30 42 0 32 44 5
block 42 18 0 44 20 5
block 18 42 0 20 44 5
block 42 42 0 44 44 5
block 30 6 0 32 8 5
block 6 30 0 8 32 5
block 54 30 0 56 32 5
block 30 54 0 32 56 5
enemy 5.5 17.5 1.5
enemy 8.5 32.5 1.5
enemy 3.5 39.5 1.5
enemy 6.5 54.5 1.5
enemy 21.5 7.5 1.5
enemy 16.5 14.5 1.5
enemy 19.5 29.5 1.5
enemy 14.5 44.5 1.5
enemy 17.5 51.5 1.5
enemy 32.5 4.5 1.5
enemy 27.5 19.5 1.5
enemy 30.5 26.5 1.5
enemy 33.5 41.5 1.5
enemy 28.5 56.5 1.5
enemy 43.5 9.5 1.5
enemy 38.5 16.5 1.5
enemy 41.5 31.5 1.5
enemy 44.5 38.5 1.5
enemy 39.5 53.5 1.5
enemy 54.5 6.5 1.5
enemy 57.5 21.5 1.5
enemy 52.5 28.5 1.5
enemy 55.5 43.5 1.5
enemy 50.5 50.5 1.5
enemy 57.5 57.5 1.5
spawn 6.5 6.5 1.5 225
)";

inline Map default_map() { return parse_map(kDefaultMapText); }

// Seeded map on the same room skeleton with random door offsets, cover
// pillars and turret positions. The start room never holds a turret.
inline Map generate_map(std::uint64_t seed) {
  Rng rng(seed);
  std::ostringstream out;
  out << "size 61 61 5\n";
  for (int k : {0, 5}) {
    out << "block " << 12 * k << " 0 0 " << 12 * k + 1 << " 61 5\n";
    out << "block 0 " << 12 * k << " 0 61 " << 12 * k + 1 << " 5\n";
  }
  for (int k = 1; k < 5; ++k) {
    const int w = 12 * k;
    for (int r = 0; r < 5; ++r) {
      const int y0 = 12 * r + 1;
      const int door_v = 1 + rng.uniform_int(6);
      const int door_h = 1 + rng.uniform_int(6);
      out << "block " << w << ' ' << y0 << " 0 " << w + 1 << ' ' << y0 + door_v << " 5\n";
      out << "block " << w << ' ' << y0 + door_v + 3 << " 0 " << w + 1 << ' ' << y0 + 11 << " 5\n";
      out << "block " << y0 << ' ' << w << " 0 " << y0 + door_h << ' ' << w + 1 << " 5\n";
      out << "block " << y0 + door_h + 3 << ' ' << w << " 0 " << y0 + 11 << ' ' << w + 1 << " 5\n";
    }
  }
  std::vector<std::pair<int, int>> pillars;
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      if ((r == 0 && c == 0) || !rng.bernoulli(0.35)) continue;
      const int px = 12 * c + 4 + rng.uniform_int(4);
      const int py = 12 * r + 4 + rng.uniform_int(4);
      pillars.emplace_back(px, py);
      out << "block " << px << ' ' << py << " 0 " << px + 2 << ' ' << py + 2 << " 5\n";
    }
  }
  auto in_pillar = [&](int x, int y) {
    for (const auto& [px, py] : pillars) {
      if (x >= px - 1 && x <= px + 2 && y >= py - 1 && y <= py + 2) return true;
    }
    return false;
  };
  int placed = 0;
  while (placed < kEnemyCount) {
    const int room = 1 + rng.uniform_int(24);
    const int x = 12 * (room % 5) + 2 + rng.uniform_int(9);
    const int y = 12 * (room / 5) + 2 + rng.uniform_int(9);
    if (in_pillar(x, y)) continue;
    out << "enemy " << x + 0.5 << ' ' << y + 0.5 << " 1.5\n";
    ++placed;
  }
  out << "spawn 6.5 6.5 1.5 225\n";
  return parse_map(out.str());
}

namespace detail {

inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a > std::numbers::pi) a -= two_pi;
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

// Walks the floor cells crossed by the segment (Amanatides-Woo). Returns true
// when no blocked cell other than the start and destination cells is crossed;
// the destination itself must be free unless allow_blocked_destination.
inline bool segment_clear(const Map& m, double x0, double y0, double x1, double y1,
                          bool allow_blocked_destination = false) {
  int cx = static_cast<int>(std::floor(x0));
  int cy = static_cast<int>(std::floor(y0));
  const int tx = static_cast<int>(std::floor(x1));
  const int ty = static_cast<int>(std::floor(y1));
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const int sx = tx > cx ? 1 : (tx < cx ? -1 : 0);
  const int sy = ty > cy ? 1 : (ty < cy ? -1 : 0);
  const double inf = std::numeric_limits<double>::infinity();
  const double tdx = sx != 0 ? std::abs(1.0 / dx) : inf;
  const double tdy = sy != 0 ? std::abs(1.0 / dy) : inf;
  double tmx = sx > 0 ? (cx + 1 - x0) * tdx : (sx < 0 ? (x0 - cx) * tdx : inf);
  double tmy = sy > 0 ? (cy + 1 - y0) * tdy : (sy < 0 ? (y0 - cy) * tdy : inf);
  const int steps = std::abs(tx - cx) + std::abs(ty - cy);
  for (int i = 0; i < steps; ++i) {
    if (tmx < tmy) {
      cx += sx;
      tmx += tdx;
    } else {
      cy += sy;
      tmy += tdy;
    }
    if (cx == tx && cy == ty) break;
    if (m.blocked(cx, cy)) return false;
  }
  return allow_blocked_destination || !m.blocked(tx, ty);
}

}  // namespace detail

struct Turret {
  Vec3 position;
  int health = 1;
  bool alive = true;
  double cooldown = 1.0;
  bool operator==(const Turret&) const = default;
};

struct HeistState {
  std::shared_ptr<const Map> map;
  Vec3 position;
  double vx = 0.0;
  double vy = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;
  int health = 100;
  int ammo = kMagazine;
  int reload_ticks_remaining = 0;
  std::vector<Turret> enemies;
  std::vector<bool> visited_cells;  // exploration cubes
  int visited_count = 0;
  int kills = 0;
  int deaths = 0;
  bool fired = false;  // a ray was fired on the last tick

  bool operator==(const HeistState& o) const {
    return position == o.position && vx == o.vx && vy == o.vy && yaw == o.yaw && pitch == o.pitch &&
           health == o.health && ammo == o.ammo && reload_ticks_remaining == o.reload_ticks_remaining &&
           enemies == o.enemies && visited_cells == o.visited_cells && visited_count == o.visited_count &&
           kills == o.kills && deaths == o.deaths && fired == o.fired;
  }
};

// Exploration cube partition of the map with a fixed cube edge.
struct CubeGrid {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  double edge = 5.0;

  static CubeGrid for_map(const Map& m, double edge) {
    CubeGrid g;
    g.edge = edge;
    g.nx = static_cast<int>(std::ceil(m.width / edge));
    g.ny = static_cast<int>(std::ceil(m.depth / edge));
    g.nz = static_cast<int>(std::ceil(m.height / edge));
    return g;
  }
  int count() const { return nx * ny * nz; }
  int index(const Vec3& p) const {
    const int ix = std::clamp(static_cast<int>(std::floor(p.x / edge)), 0, nx - 1);
    const int iy = std::clamp(static_cast<int>(std::floor(p.y / edge)), 0, ny - 1);
    const int iz = std::clamp(static_cast<int>(std::floor(p.z / edge)), 0, nz - 1);
    return (iz * ny + iy) * nx + ix;
  }
};

inline bool has_line_of_sight(const Map& m, const Vec3& a, const Vec3& b) {
  return detail::segment_clear(m, a.x, a.y, b.x, b.y);
}

inline Vec3 aim_direction(double yaw, double pitch) {
  return {std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch)};
}

// Angle between the aim ray and the direction to a target.
inline double aim_error(const Vec3& eye, double yaw, double pitch, const Vec3& target) {
  const Vec3 d = aim_direction(yaw, pitch);
  const double tx = target.x - eye.x;
  const double ty = target.y - eye.y;
  const double tz = target.z - eye.z;
  const double dist = std::sqrt(tx * tx + ty * ty + tz * tz);
  if (dist == 0.0) return 0.0;
  const double c = std::clamp((d.x * tx + d.y * ty + d.z * tz) / dist, -1.0, 1.0);
  return std::acos(c);
}

// Index of the nearest alive turret, or -1.
inline int nearest_alive_enemy(const HeistState& s) {
  int best = -1;
  double best_d = 0.0;
  for (std::size_t i = 0; i < s.enemies.size(); ++i) {
    if (!s.enemies[i].alive) continue;
    const double dx = s.enemies[i].position.x - s.position.x;
    const double dy = s.enemies[i].position.y - s.position.y;
    const double d = dx * dx + dy * dy;
    if (best < 0 || d < best_d) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  return best;
}

// Facing term in [-1, 1] from yaw alone: 1 facing the nearest alive enemy,
// -1 facing directly away, 0 when no enemy is alive.
inline double facing_score(const HeistState& s) {
  const int i = nearest_alive_enemy(s);
  if (i < 0) return 0.0;
  const auto& e = s.enemies[static_cast<std::size_t>(i)].position;
  const double bearing = std::atan2(e.y - s.position.y, e.x - s.position.x);
  const double off = std::abs(detail::wrap_angle(bearing - s.yaw));
  return 1.0 - 2.0 * off / std::numbers::pi;
}

inline HeistState initial_state(std::shared_ptr<const Map> map, Rng& game_rng,
                                const RewardParams& reward = {}, const Params& p = {}) {
  HeistState s;
  s.map = std::move(map);
  const Map& m = *s.map;
  s.position = m.spawn;
  s.yaw = m.spawn_yaw;
  s.health = p.player_health;
  for (const auto& e : m.enemies) {
    s.enemies.push_back({e, 1, true, p.turret_interval * game_rng.uniform(0.5, 1.0)});
  }
  const CubeGrid cubes = CubeGrid::for_map(m, reward.cube_edge);
  s.visited_cells.assign(static_cast<std::size_t>(cubes.count()), false);
  s.visited_cells[static_cast<std::size_t>(cubes.index(s.position))] = true;
  s.visited_count = 1;
  return s;
}

namespace detail {

inline bool body_blocked(const Map& m, double x, double y, double r) {
  const int x0 = static_cast<int>(std::floor(x - r));
  const int x1 = static_cast<int>(std::floor(x + r));
  const int y0 = static_cast<int>(std::floor(y - r));
  const int y1 = static_cast<int>(std::floor(y + r));
  for (int cy = y0; cy <= y1; ++cy)
    for (int cx = x0; cx <= x1; ++cx)
      if (m.blocked(cx, cy)) return true;
  return false;
}

}  // namespace detail

// Actions: branch 0 strafe (0 left, 1 none, 2 right), branch 1 depth
// (0 back, 1 none, 2 forward), branch 2 shoot (0 no, 1 yes); continuous
// slot 0 turns yaw, slot 1 turns pitch, each at up to turn_rate.
inline HeistState heist_tick(HeistState s, const Action& action, double dt,
                             const RewardParams& reward = {}, const Params& p = {}) {
  const Map& m = *s.map;
  const int strafe = signed_choice(action.discrete.at(0));
  const int depth = signed_choice(action.discrete.at(1));
  const bool shoot = action.discrete.at(2) == 1;

  s.yaw = detail::wrap_angle(s.yaw + action.continuous.at(0) * p.turn_rate * dt);
  s.pitch = std::clamp(s.pitch + action.continuous.at(1) * p.turn_rate * dt, -p.max_pitch, p.max_pitch);

  const double fx = std::cos(s.yaw);
  const double fy = std::sin(s.yaw);
  double mx = depth * fx + strafe * fy;
  double my = depth * fy - strafe * fx;
  const double norm = std::hypot(mx, my);
  if (norm > 0.0) {
    mx *= p.move_speed / norm;
    my *= p.move_speed / norm;
  }
  const double ox = s.position.x;
  const double oy = s.position.y;
  const double nx = ox + mx * dt;
  if (!detail::body_blocked(m, nx, s.position.y, p.player_radius)) s.position.x = nx;
  const double ny = s.position.y + my * dt;
  if (!detail::body_blocked(m, s.position.x, ny, p.player_radius)) s.position.y = ny;
  s.vx = (s.position.x - ox) / dt;
  s.vy = (s.position.y - oy) / dt;

  if (s.reload_ticks_remaining > 0 && --s.reload_ticks_remaining == 0) s.ammo = kMagazine;

  s.fired = false;
  if (shoot && s.ammo > 0 && s.reload_ticks_remaining == 0) {
    s.fired = true;
    --s.ammo;
    int target = -1;
    double target_d = 0.0;
    for (std::size_t i = 0; i < s.enemies.size(); ++i) {
      const Turret& t = s.enemies[i];
      if (!t.alive) continue;
      if (aim_error(s.position, s.yaw, s.pitch, t.position) >= p.hit_tolerance) continue;
      if (!has_line_of_sight(m, s.position, t.position)) continue;
      const double d = std::hypot(t.position.x - s.position.x, t.position.y - s.position.y);
      if (target < 0 || d < target_d) {
        target = static_cast<int>(i);
        target_d = d;
      }
    }
    if (target >= 0) {
      Turret& t = s.enemies[static_cast<std::size_t>(target)];
      if (--t.health <= 0) {
        t.alive = false;
        ++s.kills;
      }
    }
    if (s.ammo == 0) s.reload_ticks_remaining = std::max(1, static_cast<int>(std::lround(p.reload_seconds / dt)));
  }

  const CubeGrid cubes = CubeGrid::for_map(m, reward.cube_edge);
  const auto cube = static_cast<std::size_t>(cubes.index(s.position));
  if (!s.visited_cells[cube]) {
    s.visited_cells[cube] = true;
    ++s.visited_count;
  }

  for (auto& t : s.enemies) {
    if (!t.alive) continue;
    const double d = std::hypot(t.position.x - s.position.x, t.position.y - s.position.y);
    if (d <= p.turret_range && has_line_of_sight(m, t.position, s.position)) {
      t.cooldown -= dt;
      if (t.cooldown <= 1e-9) {
        s.health -= p.turret_damage;
        t.cooldown = p.turret_interval;
      }
    } else {
      t.cooldown = p.turret_interval;
    }
  }
  if (s.health <= 0) {
    ++s.deaths;
    s.position = m.spawn;
    s.yaw = m.spawn_yaw;
    s.pitch = 0.0;
    s.vx = s.vy = 0.0;
    s.health = p.player_health;
    s.ammo = kMagazine;
    s.reload_ticks_remaining = 0;
  }
  return s;
}

inline double score_of(const HeistState& s, const RewardParams& r) { return s.kills * r.kill_value; }

// R_B = dR_E + E [entered a new cube] + A
inline double heist_behaviour_reward(const HeistState& prev, const HeistState& cur,
                                     const RewardParams& r = {}) {
  double rb = score_of(cur, r) - score_of(prev, r);
  if (cur.visited_count > prev.visited_count) rb += r.exploration_bonus;
  return rb + facing_score(cur);
}

// A cell is in view when it lies inside the horizontal field of view and the
// floor path to its centre crosses no obstacle before reaching it.
inline bool cell_visible(const HeistState& s, double wx, double wy, double forward, double lateral,
                         const Params& p) {
  if (std::atan2(std::abs(lateral), forward) > p.fov / 2.0) return false;
  return detail::segment_clear(*s.map, s.position.x, s.position.y, wx, wy, true);
}

// Nearest turret inside the field of view with a clear line of sight.
inline int nearest_visible_enemy(const HeistState& s, const Params& p = {}) {
  int best = -1;
  double best_d = 0.0;
  const double fx = std::cos(s.yaw);
  const double fy = std::sin(s.yaw);
  for (std::size_t i = 0; i < s.enemies.size(); ++i) {
    const Turret& t = s.enemies[i];
    if (!t.alive) continue;
    const double dx = t.position.x - s.position.x;
    const double dy = t.position.y - s.position.y;
    const double fwd = dx * fx + dy * fy;
    const double lat = dx * fy - dy * fx;
    if (std::atan2(std::abs(lat), fwd) > p.fov / 2.0) continue;
    if (!has_line_of_sight(*s.map, s.position, t.position)) continue;
    const double d = std::hypot(dx, dy);
    if (best < 0 || d < best_d) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  return best;
}

// 9 x 9 view grid in the player frame (row 0 farthest, column 0 leftmost,
// 2-unit cells out to 18 units ahead) plus 20 properties:
//  0-2  position / map extent        3-4  velocity / move speed
//  5-6  sin, cos yaw                 7    pitch / max pitch
//  8    health fraction              9    ammo / magazine
//  10   reloading flag               11-12 unit vector to nearest visible enemy (forward, right)
//  13   distance to it / map diagonal (1 when none visible)
//  14   kills / 25                   15   remaining time fraction
//  16   visited cubes / cube count   17-19 zero padding
inline Observation observe_heist(const HeistState& s, double remaining_fraction,
                                 const RewardParams& reward = {}, const Params& p = {}) {
  const Map& m = *s.map;
  Observation o;
  o.rows = o.cols = kGridSize;
  o.grid.assign(kGridSize * kGridSize, kIdObscured);
  const double fx = std::cos(s.yaw);
  const double fy = std::sin(s.yaw);
  const double cell = p.grid_cell;
  for (int r = 0; r < kGridSize; ++r) {
    const double forward = (kGridSize - 1 - r + 0.5) * cell;
    for (int c = 0; c < kGridSize; ++c) {
      const double lateral = (c - kGridSize / 2) * cell;
      const double wx = s.position.x + forward * fx + lateral * fy;
      const double wy = s.position.y + forward * fy - lateral * fx;
      if (!cell_visible(s, wx, wy, forward, lateral, p)) continue;
      if (m.blocked_at(wx, wy)) {
        o.at(r, c) = kIdObstacle;
        continue;
      }
      o.at(r, c) = kIdEmpty;
      for (const auto& t : s.enemies) {
        if (!t.alive) continue;
        const double dx = t.position.x - s.position.x;
        const double dy = t.position.y - s.position.y;
        const double tf = dx * fx + dy * fy;
        const double tl = dx * fy - dy * fx;
        if (std::abs(tf - forward) <= cell / 2 && std::abs(tl - lateral) <= cell / 2 &&
            has_line_of_sight(m, s.position, t.position)) {
          o.at(r, c) = kIdEnemy;
          break;
        }
      }
    }
  }
  const double diag = std::hypot(m.width, m.depth);
  double ef = 0.0;
  double el = 0.0;
  double ed = 1.0;
  if (const int i = nearest_visible_enemy(s, p); i >= 0) {
    const auto& t = s.enemies[static_cast<std::size_t>(i)].position;
    const double dx = t.x - s.position.x;
    const double dy = t.y - s.position.y;
    const double d = std::hypot(dx, dy);
    if (d > 0.0) {
      ef = (dx * fx + dy * fy) / d;
      el = (dx * fy - dy * fx) / d;
    }
    ed = std::min(1.0, d / diag);
  }
  const CubeGrid cubes = CubeGrid::for_map(m, reward.cube_edge);
  o.properties = {s.position.x / m.width,
                  s.position.y / m.depth,
                  s.position.z / m.height,
                  s.vx / p.move_speed,
                  s.vy / p.move_speed,
                  std::sin(s.yaw),
                  std::cos(s.yaw),
                  s.pitch / p.max_pitch,
                  static_cast<double>(s.health) / p.player_health,
                  static_cast<double>(s.ammo) / kMagazine,
                  s.reload_ticks_remaining > 0 ? 1.0 : 0.0,
                  ef,
                  el,
                  ed,
                  static_cast<double>(s.kills) / kEnemyCount,
                  remaining_fraction,
                  static_cast<double>(s.visited_count) / cubes.count(),
                  0.0,
                  0.0,
                  0.0};
  return o;
}

// P = (kills, ammo, health, visited-cube count, distance from spawn)
inline std::vector<double> affect_features(const HeistState& s) {
  const double d = std::hypot(s.position.x - s.map->spawn.x, s.position.y - s.map->spawn.y);
  return {static_cast<double>(s.kills), static_cast<double>(s.ammo), static_cast<double>(s.health),
          static_cast<double>(s.visited_count), d};
}

class HeistGame final : public Game {
 public:
  explicit HeistGame(std::shared_ptr<const Map> map = nullptr, RewardParams reward = {}, Params params = {},
                     bool generate_per_seed = false);

  GameId id() const override { return GameId::Heist; }
  ActionSpec action_spec() const override { return {{3, 3, 2}, 2}; }

  void reset(std::uint64_t layout_seed, std::uint64_t game_seed) override;

  void tick(const Action& action, double dt) override {
    prev_ = cur_;
    cur_ = heist_tick(cur_, action, dt, reward_, params_);
  }

  double behaviour_reward() const override { return heist_behaviour_reward(prev_, cur_, reward_); }
  double score() const override { return score_of(cur_, reward_); }
  double max_score() const override {
    return generate_per_seed_ ? map_->enemies.size() * reward_.kill_value : reward_.max_score;
  }
  bool goal_reached() const override {
    return cur_.kills == static_cast<int>(cur_.enemies.size());
  }
  BehaviourBounds behaviour_bounds() const override {
    return {-1.0, reward_.kill_value + reward_.exploration_bonus + 1.0};
  }

  Observation observe(double remaining_fraction) const override {
    return observe_heist(cur_, remaining_fraction, reward_, params_);
  }
  int grid_id_count() const override { return kIdCount; }

  std::vector<double> affect_features() const override { return heist::affect_features(cur_); }
  std::vector<std::string> affect_feature_names() const override {
    return {"kills", "ammo", "health", "visited_cubes", "distance_from_spawn"};
  }

  std::unique_ptr<Game> clone() const override { return std::make_unique<HeistGame>(*this); }

  const HeistState& state() const { return cur_; }
  const HeistState& previous_state() const { return prev_; }
  const Map& map() const { return *map_; }
  const Params& params() const { return params_; }

 private:
  std::shared_ptr<const Map> map_;
  RewardParams reward_;
  Params params_;
  bool generate_per_seed_;
  HeistState prev_;
  HeistState cur_;
};

inline HeistGame::HeistGame(std::shared_ptr<const Map> map, RewardParams reward, Params params,
                            bool generate_per_seed)
    : map_(map ? std::move(map) : std::make_shared<const Map>(default_map())),
      reward_(reward),
      params_(params),
      generate_per_seed_(generate_per_seed) {}

inline void HeistGame::reset(std::uint64_t layout_seed, std::uint64_t game_seed) {
  if (generate_per_seed_) map_ = std::make_shared<const Map>(generate_map(layout_seed));
  Rng rng(game_seed);
  cur_ = initial_state(map_, rng, reward_, params_);
  prev_ = cur_;
}

}  // namespace affectively::heist
