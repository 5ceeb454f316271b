#pragma once

// Side-scrolling platformer. Reach the exit within the clock while collecting
// coins and power-ups; enemies and pits kill, and the player respawns at the
// furthest checkpoint reached.
//
// Coordinates are in tiles: x grows to the right, y grows downward (row index),
// tile (col, row) covers [col, col + 1) x [row, row + 1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "affectively/core/errors.hpp"
#include "affectively/core/game.hpp"
#include "affectively/core/rng.hpp"
#include "affectively/core/spaces.hpp"

namespace affectively::pirates {

// Level legend, one character per tile:
//   .  empty        #  obstacle     B  breakable (solid until hit from below)
//   o  coin         *  power-up     E  enemy spawn
//   C  checkpoint   X  exit         S  player start
// Lines starting with ';' are comments. All rows must have equal width.
enum class Terrain : std::uint8_t { Empty, Obstacle, Breakable, Checkpoint, Exit };

// Observation grid IDs. Higher value wins when several entities share a cell.
inline constexpr int kIdEmpty = 0;
inline constexpr int kIdObstacle = 1;
inline constexpr int kIdBreakable = 2;
inline constexpr int kIdCollectible = 3;
inline constexpr int kIdEnemy = 4;
inline constexpr int kIdPlayer = 5;
inline constexpr int kIdCount = 6;

inline constexpr int kGridSize = 11;
inline constexpr int kPropertyCount = 7;

struct RewardParams {
  double move_right_bonus = 0.1;
  double death_penalty = 5.0;
  double coin_value = 10.0;
  double powerup_value = 20.0;
  double max_score = 460.0;
};

struct PhysicsParams {
  double gravity = 30.0;           // tiles/s^2
  double jump_impulse = 12.0;      // tiles/s
  double run_speed = 6.0;          // tiles/s
  double terminal_velocity = 20.0; // tiles/s
  double enemy_speed = 2.0;        // tiles/s
  double powerup_seconds = 10.0;
  double half_extent = 0.4;        // player and enemy boxes are 0.8 x 0.8
  int substeps = 4;
};

struct Cell {
  int col = 0;
  int row = 0;
  bool operator==(const Cell&) const = default;
};

struct Item {
  Cell cell;
  bool powerup = false;
};

struct Level {
  int width = 0;
  int height = 0;
  std::vector<Terrain> terrain;  // row-major
  std::vector<Item> items;
  std::vector<Cell> enemy_spawns;
  std::vector<Cell> checkpoints;
  Cell start;

  bool in_bounds(int col, int row) const { return col >= 0 && col < width && row >= 0 && row < height; }
  int index(int col, int row) const { return row * width + col; }
  Terrain at(int col, int row) const { return terrain[static_cast<std::size_t>(index(col, row))]; }

  double total_score(const RewardParams& p) const {
    double s = 0.0;
    for (const auto& it : items) s += it.powerup ? p.powerup_value : p.coin_value;
    return s;
  }
};

inline Level parse_level(std::string_view text) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == ';') continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw FormatError("pirates level: no tile rows");
  Level lv;
  lv.height = static_cast<int>(rows.size());
  lv.width = static_cast<int>(rows.front().size());
  lv.terrain.assign(static_cast<std::size_t>(lv.width * lv.height), Terrain::Empty);
  bool has_start = false;
  bool has_exit = false;
  for (int r = 0; r < lv.height; ++r) {
    if (static_cast<int>(rows[r].size()) != lv.width) {
      throw FormatError("pirates level: row " + std::to_string(r) + " has width " +
                        std::to_string(rows[r].size()) + ", expected " + std::to_string(lv.width));
    }
    for (int c = 0; c < lv.width; ++c) {
      auto& t = lv.terrain[static_cast<std::size_t>(lv.index(c, r))];
      switch (rows[r][c]) {
        case '.': break;
        case '#': t = Terrain::Obstacle; break;
        case 'B': t = Terrain::Breakable; break;
        case 'o': lv.items.push_back({{c, r}, false}); break;
        case '*': lv.items.push_back({{c, r}, true}); break;
        case 'E': lv.enemy_spawns.push_back({c, r}); break;
        case 'C':
          t = Terrain::Checkpoint;
          lv.checkpoints.push_back({c, r});
          break;
        case 'X':
          t = Terrain::Exit;
          has_exit = true;
          break;
        case 'S':
          if (has_start) throw FormatError("pirates level: more than one start tile");
          lv.start = {c, r};
          has_start = true;
          break;
        default:
          throw FormatError(std::string("pirates level: unknown tile '") + rows[r][c] + "' at row " +
                            std::to_string(r) + ", column " + std::to_string(c));
      }
    }
  }
  if (!has_start) throw FormatError("pirates level: missing start tile 'S'");
  if (!has_exit) throw FormatError("pirates level: missing exit tile 'X'");
  // At most one collectible can touch the player box at the end of a tick,
  // which keeps the per-tick reward within its documented bounds.
  for (std::size_t i = 0; i < lv.items.size(); ++i) {
    for (std::size_t j = i + 1; j < lv.items.size(); ++j) {
      const int dc = std::abs(lv.items[i].cell.col - lv.items[j].cell.col);
      const int dr = std::abs(lv.items[i].cell.row - lv.items[j].cell.row);
      if (dc <= 1 && dr <= 1) {
        throw FormatError("pirates level: collectibles at columns " +
                          std::to_string(lv.items[i].cell.col) + " and " +
                          std::to_string(lv.items[j].cell.col) + " are adjacent");
      }
    }
  }
  std::sort(lv.checkpoints.begin(), lv.checkpoints.end(),
            [](const Cell& a, const Cell& b) { return a.col < b.col; });
  return lv;
}

inline std::string to_text(const Level& lv) {
  std::vector<std::string> rows(static_cast<std::size_t>(lv.height), std::string(static_cast<std::size_t>(lv.width), '.'));
  for (int r = 0; r < lv.height; ++r) {
    for (int c = 0; c < lv.width; ++c) {
      switch (lv.at(c, r)) {
        case Terrain::Obstacle: rows[r][c] = '#'; break;
        case Terrain::Breakable: rows[r][c] = 'B'; break;
        case Terrain::Checkpoint: rows[r][c] = 'C'; break;
        case Terrain::Exit: rows[r][c] = 'X'; break;
        case Terrain::Empty: break;
      }
    }
  }
  for (const auto& it : lv.items) rows[it.cell.row][it.cell.col] = it.powerup ? '*' : 'o';
  for (const auto& e : lv.enemy_spawns) rows[e.row][e.col] = 'E';
  rows[lv.start.row][lv.start.col] = 'S';
  std::string out;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

// The shipped level: 200 x 14 tiles, 36 coins and 5 power-ups (460 points).
inline constexpr std::string_view kDefaultLevelText = R"(
........................................................................................................................................................................................................
........................................................................................................................................................................................................
........................................................................................................................................................................................................
........................................................................................................................................................................................................
........................................................................................................................................................................................................
........................................................................................................................................................................................................
........................................................................................................................................................................................................
........................................................................................................................................................................................................
.........................................................o.o............................................................o.o.............................................................................
.................................o............o..o......BBBBB......o................o...o........*......o....o.........BBBBB..........o.............o...............*......o............o...............
...........................................#........#......................................#...#####...........................#.........#........................#####...........#.....................
..S...........o..o..o..o..#..oCo.....o..o..#....E...#.....*...C.........o..o..o..#....E....#.........C...........o..o..........#..o.E....#..*..C.........o..o..o.........#...E.o..#..C......o..o..*..X..
#################################..###############################...###################################..###..####################################...##################################..##############
#################################..###############################...###################################..###..####################################...##################################..##############
)";

inline Level default_level() { return parse_level(kDefaultLevelText); }

// Seeded level with the same vocabulary as the shipped one: flat ground with
// pits, low walls, breakable ceilings, patrolling enemies and checkpoints.
inline Level generate_level(std::uint64_t seed, int width = 200) {
  if (width < 40) throw ConfigError("pirates generator: width must be >= 40");
  constexpr int H = 14;
  Rng rng(seed);
  std::vector<std::string> g(H, std::string(static_cast<std::size_t>(width), '.'));
  for (int c = 0; c < width; ++c) g[12][c] = g[13][c] = '#';
  auto free_item_slot = [&](int c, int r) {
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int cc = c + dc;
        const int rr = r + dr;
        if (cc < 0 || cc >= width || rr < 0 || rr >= H) continue;
        if (g[rr][cc] == 'o' || g[rr][cc] == '*') return false;
      }
    }
    return g[r][c] == '.';
  };
  int c = 8;
  int next_checkpoint = 30;
  while (c < width - 12) {
    if (c >= next_checkpoint) {
      g[11][c] = 'C';
      next_checkpoint += 35 + rng.uniform_int(10);
      c += 3;
      continue;
    }
    switch (rng.uniform_int(6)) {
      case 0: {  // pit with a coin above it
        const int w = 2 + rng.uniform_int(2);
        for (int k = 0; k < w; ++k) g[12][c + k] = g[13][c + k] = '.';
        if (free_item_slot(c + w / 2, 9)) g[9][c + w / 2] = 'o';
        c += w + 3;
        break;
      }
      case 1: {  // wall
        const int h = 1 + rng.uniform_int(2);
        for (int k = 0; k < h; ++k) g[11 - k][c] = '#';
        c += 4;
        break;
      }
      case 2: {  // enemy arena between two walls
        if (c + 10 >= width - 12) {
          c += 2;
          break;
        }
        g[11][c] = '#';
        g[11][c + 9] = '#';
        g[11][c + 5] = 'E';
        if (free_item_slot(c + 3, 9)) g[9][c + 3] = 'o';
        c += 12;
        break;
      }
      case 3: {  // breakable ceiling with coins above and a power-up below
        if (c + 6 >= width - 12) {
          c += 2;
          break;
        }
        for (int k = 0; k < 5; ++k) g[9][c + k] = 'B';
        if (free_item_slot(c + 1, 8)) g[8][c + 1] = 'o';
        if (free_item_slot(c + 3, 8)) g[8][c + 3] = 'o';
        if (rng.bernoulli(0.4) && free_item_slot(c + 2, 11)) g[11][c + 2] = '*';
        c += 7;
        break;
      }
      default: {  // coins on the ground
        int placed = 0;
        while (placed < 3 && c < width - 12) {
          if (free_item_slot(c, 11)) g[11][c] = 'o';
          c += 3;
          ++placed;
        }
        break;
      }
    }
  }
  g[11][2] = 'S';
  g[11][width - 3] = 'X';
  std::string text;
  for (const auto& r : g) text += r + "\n";
  return parse_level(text);
}

struct Enemy {
  double x = 0.0;
  double y = 0.0;
  int dir = -1;
  bool alive = true;
  bool operator==(const Enemy&) const = default;
};

struct PiratesState {
  std::shared_ptr<const Level> level;
  double x = 0.0;  // box centre
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  int facing = 1;
  bool grounded = false;
  int health = 1;
  bool powered_up = false;
  double powerup_timer = 0.0;
  Cell last_checkpoint;
  std::vector<bool> collected;  // per level item
  std::vector<bool> broken;     // per terrain tile
  std::vector<Enemy> enemies;
  int coins = 0;
  int powerups = 0;
  int deaths = 0;
  bool reached_exit = false;
  double last_dx = 0.0;  // horizontal displacement from physics on the last tick

  bool operator==(const PiratesState& o) const {
    return x == o.x && y == o.y && vx == o.vx && vy == o.vy && facing == o.facing &&
           grounded == o.grounded && health == o.health && powered_up == o.powered_up &&
           powerup_timer == o.powerup_timer && last_checkpoint == o.last_checkpoint &&
           collected == o.collected && broken == o.broken && enemies == o.enemies &&
           coins == o.coins && powerups == o.powerups &&
           deaths == o.deaths && reached_exit == o.reached_exit && last_dx == o.last_dx;
  }
};

// Collision terrain. Out-of-level space is solid on the left, right and top
// and open below so that falling into a pit leaves the level.
inline bool is_solid(const PiratesState& s, int col, int row) {
  const Level& lv = *s.level;
  if (col < 0 || col >= lv.width || row < 0) return true;
  if (row >= lv.height) return false;
  const Terrain t = lv.at(col, row);
  if (t == Terrain::Obstacle) return true;
  if (t == Terrain::Breakable) return !s.broken[static_cast<std::size_t>(lv.index(col, row))];
  return false;
}

namespace detail {

inline constexpr double kEps = 1e-9;

inline int lo_cell(double v) { return static_cast<int>(std::floor(v + kEps)); }
inline int hi_cell(double v) { return static_cast<int>(std::floor(v - kEps)); }

inline void place_at(PiratesState& s, Cell c, double h) {
  s.x = c.col + 0.5;
  s.y = c.row + 1.0 - h;
  s.vx = 0.0;
  s.vy = 0.0;
  s.grounded = false;
}

inline bool boxes_overlap(double ax, double ay, double bx, double by, double half) {
  return std::abs(ax - bx) < 2 * half && std::abs(ay - by) < 2 * half;
}

inline bool box_overlaps_cell(double x, double y, double h, Cell c) {
  return x + h > c.col && x - h < c.col + 1 && y + h > c.row && y - h < c.row + 1;
}

inline void move_horizontal(PiratesState& s, double dx, double h) {
  if (dx == 0.0) return;
  s.x += dx;
  const int r0 = lo_cell(s.y - h);
  const int r1 = hi_cell(s.y + h);
  if (dx > 0) {
    const int col = hi_cell(s.x + h);
    for (int r = r0; r <= r1; ++r) {
      if (is_solid(s, col, r)) {
        s.x = col - h;
        s.vx = 0.0;
        return;
      }
    }
  } else {
    const int col = lo_cell(s.x - h);
    for (int r = r0; r <= r1; ++r) {
      if (is_solid(s, col, r)) {
        s.x = col + 1 + h;
        s.vx = 0.0;
        return;
      }
    }
  }
}

inline void move_vertical(PiratesState& s, double dy, double h) {
  if (dy == 0.0) return;
  s.y += dy;
  const int c0 = lo_cell(s.x - h);
  const int c1 = hi_cell(s.x + h);
  if (dy > 0) {
    const int row = hi_cell(s.y + h);
    for (int c = c0; c <= c1; ++c) {
      if (is_solid(s, c, row)) {
        s.y = row - h;
        s.vy = 0.0;
        return;
      }
    }
  } else {
    const int row = lo_cell(s.y - h);
    bool hit = false;
    for (int c = c0; c <= c1; ++c) {
      if (!is_solid(s, c, row)) continue;
      hit = true;
      const Level& lv = *s.level;
      if (lv.in_bounds(c, row) && lv.at(c, row) == Terrain::Breakable) {
        s.broken[static_cast<std::size_t>(lv.index(c, row))] = true;
      }
    }
    if (hit) {
      s.y = row + 1 + h;
      s.vy = 0.0;
    }
  }
}

inline bool standing_on_ground(const PiratesState& s, double h) {
  const double feet = s.y + h;
  const int row = lo_cell(feet);
  if (std::abs(feet - row) > 1e-6) return false;
  for (int c = lo_cell(s.x - h); c <= hi_cell(s.x + h); ++c) {
    if (is_solid(s, c, row)) return true;
  }
  return false;
}

}  // namespace detail

inline PiratesState initial_state(std::shared_ptr<const Level> level, Rng& game_rng,
                                  const PhysicsParams& phys = {}) {
  PiratesState s;
  s.level = std::move(level);
  const Level& lv = *s.level;
  s.collected.assign(lv.items.size(), false);
  s.broken.assign(static_cast<std::size_t>(lv.width * lv.height), false);
  for (const auto& e : lv.enemy_spawns) {
    s.enemies.push_back({e.col + 0.5, e.row + 0.5, game_rng.bernoulli(0.5) ? 1 : -1, true});
  }
  s.last_checkpoint = lv.start;
  detail::place_at(s, lv.start, phys.half_extent);
  s.grounded = detail::standing_on_ground(s, phys.half_extent);
  return s;
}

// Advances one tick. Actions: branch 0 = horizontal (0 left, 1 still,
// 2 right), branch 1 = jump (0 no, 1 yes).
inline PiratesState pirates_tick(PiratesState s, const Action& action, double dt,
                                 const PhysicsParams& phys = {}) {
  const double h = phys.half_extent;
  const Level& lv = *s.level;
  const int move = signed_choice(action.discrete.at(0));
  const bool jump = action.discrete.at(1) == 1;

  s.vx = move * phys.run_speed;
  if (move != 0) s.facing = move;
  if (jump && s.grounded) s.vy = -phys.jump_impulse;
  s.vy = std::min(s.vy + phys.gravity * dt, phys.terminal_velocity);

  const double x_before = s.x;
  const double vx = s.vx;
  for (int i = 0; i < phys.substeps; ++i) {
    detail::move_horizontal(s, vx * dt / phys.substeps, h);
    detail::move_vertical(s, s.vy * dt / phys.substeps, h);
  }
  s.vx = vx;
  s.last_dx = s.x - x_before;
  s.grounded = detail::standing_on_ground(s, h);
  if (s.grounded && s.vy > 0) s.vy = 0.0;

  // Enemies patrol and turn around at walls and ledges.
  for (auto& e : s.enemies) {
    if (!e.alive) continue;
    const double nx = e.x + e.dir * phys.enemy_speed * dt;
    const int lead_col = static_cast<int>(std::floor(nx + e.dir * h));
    const int row = static_cast<int>(std::floor(e.y));
    if (is_solid(s, lead_col, row) || !is_solid(s, lead_col, row + 1)) {
      e.dir = -e.dir;
    } else {
      e.x = nx;
    }
  }

  for (std::size_t i = 0; i < lv.items.size(); ++i) {
    if (s.collected[i] || !detail::box_overlaps_cell(s.x, s.y, h, lv.items[i].cell)) continue;
    s.collected[i] = true;
    if (lv.items[i].powerup) {
      ++s.powerups;
      s.powered_up = true;
      s.powerup_timer = phys.powerup_seconds;
    } else {
      ++s.coins;
    }
  }

  bool died = false;
  for (auto& e : s.enemies) {
    if (!e.alive || !detail::boxes_overlap(s.x, s.y, e.x, e.y, h)) continue;
    if (s.powered_up) {
      e.alive = false;
      s.powered_up = false;
      s.powerup_timer = 0.0;
    } else {
      died = true;
      break;
    }
  }
  if (s.y - h > lv.height + 1.0) died = true;

  if (died) {
    ++s.deaths;
    s.health = 1;
    s.powered_up = false;
    s.powerup_timer = 0.0;
    detail::place_at(s, s.last_checkpoint, h);
    s.grounded = detail::standing_on_ground(s, h);
  } else {
    for (const auto& cp : lv.checkpoints) {
      if (cp.col > s.last_checkpoint.col && s.x >= cp.col + 0.5) s.last_checkpoint = cp;
    }
    const int c0 = detail::lo_cell(s.x - h);
    const int c1 = detail::hi_cell(s.x + h);
    const int r0 = detail::lo_cell(s.y - h);
    const int r1 = detail::hi_cell(s.y + h);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        if (lv.in_bounds(c, r) && lv.at(c, r) == Terrain::Exit) s.reached_exit = true;
      }
    }
  }

  if (s.powered_up) {
    s.powerup_timer -= dt;
    if (s.powerup_timer <= 0.0) {
      s.powered_up = false;
      s.powerup_timer = 0.0;
    }
  }
  return s;
}

inline double score_of(const PiratesState& s, const RewardParams& p) {
  return s.coins * p.coin_value + s.powerups * p.powerup_value;
}

// R_B = dR_E + M_r [moved right] - D [died]
inline double pirates_behaviour_reward(const PiratesState& prev, const PiratesState& cur,
                                       const RewardParams& p = {}) {
  double r = score_of(cur, p) - score_of(prev, p);
  if (cur.last_dx > 1e-9) r += p.move_right_bonus;
  if (cur.deaths > prev.deaths) r -= p.death_penalty;
  return r;
}

// 11 x 11 grid centred on the player's cell plus 7 properties:
// [vx / run_speed, vy / terminal_velocity, facing, grounded, health,
//  powered_up, remaining time fraction].
inline Observation observe_pirates(const PiratesState& s, double remaining_fraction,
                                   const PhysicsParams& phys = {}) {
  const Level& lv = *s.level;
  Observation o;
  o.rows = o.cols = kGridSize;
  o.grid.assign(kGridSize * kGridSize, kIdEmpty);
  const int pc = static_cast<int>(std::floor(s.x));
  const int pr = static_cast<int>(std::floor(s.y));
  constexpr int half = kGridSize / 2;
  for (int dr = -half; dr <= half; ++dr) {
    for (int dc = -half; dc <= half; ++dc) {
      const int c = pc + dc;
      const int r = pr + dr;
      int id = kIdEmpty;
      if (!lv.in_bounds(c, r)) {
        id = kIdObstacle;
      } else {
        const Terrain t = lv.at(c, r);
        if (t == Terrain::Obstacle) id = kIdObstacle;
        if (t == Terrain::Breakable && !s.broken[static_cast<std::size_t>(lv.index(c, r))]) id = kIdBreakable;
      }
      o.at(dr + half, dc + half) = id;
    }
  }
  auto mark = [&](int c, int r, int id) {
    const int gr = r - pr + half;
    const int gc = c - pc + half;
    if (gr < 0 || gr >= kGridSize || gc < 0 || gc >= kGridSize) return;
    o.at(gr, gc) = std::max(o.at(gr, gc), id);
  };
  for (std::size_t i = 0; i < lv.items.size(); ++i) {
    if (!s.collected[i]) mark(lv.items[i].cell.col, lv.items[i].cell.row, kIdCollectible);
  }
  for (const auto& e : s.enemies) {
    if (e.alive) mark(static_cast<int>(std::floor(e.x)), static_cast<int>(std::floor(e.y)), kIdEnemy);
  }
  o.at(half, half) = kIdPlayer;
  o.properties = {s.vx / phys.run_speed,
                  s.vy / phys.terminal_velocity,
                  static_cast<double>(s.facing),
                  s.grounded ? 1.0 : 0.0,
                  static_cast<double>(s.health),
                  s.powered_up ? 1.0 : 0.0,
                  remaining_fraction};
  return o;
}

// P = (score, health, x-position, coins collected, deaths)
inline std::vector<double> affect_features(const PiratesState& s, const RewardParams& p = {}) {
  return {score_of(s, p), static_cast<double>(s.health), s.x, static_cast<double>(s.coins),
          static_cast<double>(s.deaths)};
}

class PiratesGame final : public Game {
 public:
  explicit PiratesGame(std::shared_ptr<const Level> level = nullptr, RewardParams reward = {},
                       PhysicsParams physics = {}, bool generate_per_seed = false)
      : level_(level ? std::move(level) : std::make_shared<const Level>(default_level())),
        reward_(reward),
        physics_(physics),
        generate_per_seed_(generate_per_seed) {}

  GameId id() const override { return GameId::Pirates; }
  ActionSpec action_spec() const override { return {{3, 2}, 0}; }

  void reset(std::uint64_t layout_seed, std::uint64_t game_seed) override {
    if (generate_per_seed_) level_ = std::make_shared<const Level>(generate_level(layout_seed));
    Rng rng(game_seed);
    cur_ = initial_state(level_, rng, physics_);
    prev_ = cur_;
  }

  void tick(const Action& action, double dt) override {
    prev_ = cur_;
    cur_ = pirates_tick(cur_, action, dt, physics_);
  }

  double behaviour_reward() const override { return pirates_behaviour_reward(prev_, cur_, reward_); }
  double score() const override { return score_of(cur_, reward_); }
  double max_score() const override { return generate_per_seed_ ? level_->total_score(reward_) : reward_.max_score; }
  bool goal_reached() const override { return cur_.reached_exit; }
  BehaviourBounds behaviour_bounds() const override {
    return {-reward_.death_penalty,
            std::max(reward_.coin_value, reward_.powerup_value) + reward_.move_right_bonus};
  }

  Observation observe(double remaining_fraction) const override {
    return observe_pirates(cur_, remaining_fraction, physics_);
  }
  int grid_id_count() const override { return kIdCount; }

  std::vector<double> affect_features() const override { return pirates::affect_features(cur_, reward_); }
  std::vector<std::string> affect_feature_names() const override {
    return {"score", "health", "x_position", "coins_collected", "deaths"};
  }

  std::unique_ptr<Game> clone() const override { return std::make_unique<PiratesGame>(*this); }

  const PiratesState& state() const { return cur_; }
  const PiratesState& previous_state() const { return prev_; }
  const Level& level() const { return *level_; }

 private:
  std::shared_ptr<const Level> level_;
  RewardParams reward_;
  PhysicsParams physics_;
  bool generate_per_seed_;
  PiratesState prev_;
  PiratesState cur_;
};

}  // namespace affectively::pirates
