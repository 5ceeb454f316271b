#pragma once

// Planar kinematic racer. Drive through 8 ordered waypoint gates per lap for
// three laps against the clock. Opponent cars are not simulated; they take no
// part in the score or the behaviour reward.

#include <algorithm>
#include <array>
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

namespace affectively::rally {

inline constexpr int kWaypointCount = 8;
inline constexpr int kLaps = 3;
inline constexpr int kPropertyCount = 50;
inline constexpr int kRayCount = 8;

struct RewardParams {
  double waypoint_value = 1.0;
  double max_score = 24.0;
  double speed_norm = 20.0;
};

struct Params {
  double max_forward = 20.0;       // units/s
  double max_reverse = 5.0;
  double acceleration = 8.0;       // units/s^2, also braking
  double drag = 2.0;               // coasting deceleration
  double steer_rate = std::numbers::pi / 3.0;  // heading rate at full lock
  double full_steer_speed = 5.0;   // below this speed steering authority scales down
  double wall_scrub = 0.5;         // speed multiplier on boundary contact
  double stuck_seconds = 5.0;
  double stuck_speed = 2.0;
  double ray_length = 30.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

// Track text format ('#' or ';' start comments):
//   width W                  track width
//   start_offset D           start position, D units back along the centerline from gate 0
//   waypoints i0 ... i7      centerline point index of each gate, in driving order
//   point x y                centerline point; the polyline closes on itself
struct Track {
  double width = 12.0;
  double start_offset = 15.0;
  std::vector<Vec2> points;
  std::array<int, kWaypointCount> waypoints{};

  // Derived: on-track raster for ray casting.
  double min_x = 0.0;
  double min_y = 0.0;
  double cell = 0.25;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> on_track;

  double half_width() const { return width / 2.0; }
  std::size_t size() const { return points.size(); }
  const Vec2& point(std::size_t i) const { return points[i % points.size()]; }

  Vec2 tangent_at(int index) const {
    const auto n = points.size();
    const Vec2& a = points[(static_cast<std::size_t>(index) + n - 1) % n];
    const Vec2& b = points[(static_cast<std::size_t>(index) + 1) % n];
    const double l = std::hypot(b.x - a.x, b.y - a.y);
    return {(b.x - a.x) / l, (b.y - a.y) / l};
  }

  // Gate segment across the track at waypoint w.
  std::pair<Vec2, Vec2> gate(int w) const {
    const Vec2& c = points[static_cast<std::size_t>(waypoints[static_cast<std::size_t>(w)])];
    const Vec2 t = tangent_at(waypoints[static_cast<std::size_t>(w)]);
    const Vec2 n{-t.y, t.x};
    const double h = half_width();
    return {{c.x - n.x * h, c.y - n.y * h}, {c.x + n.x * h, c.y + n.y * h}};
  }

  // Nearest point on the closed centerline.
  Vec2 nearest_centerline(const Vec2& p, double* dist = nullptr) const {
    double best = std::numeric_limits<double>::infinity();
    Vec2 out;
    const auto n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = points[i];
      const Vec2& b = points[(i + 1) % n];
      const double ex = b.x - a.x;
      const double ey = b.y - a.y;
      const double len2 = ex * ex + ey * ey;
      double t = len2 > 0 ? ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const Vec2 q{a.x + t * ex, a.y + t * ey};
      const double d = std::hypot(p.x - q.x, p.y - q.y);
      if (d < best) {
        best = d;
        out = q;
      }
    }
    if (dist) *dist = best;
    return out;
  }

  double centerline_distance(const Vec2& p) const {
    double d = 0.0;
    nearest_centerline(p, &d);
    return d;
  }

  bool raster_on_track(double x, double y) const {
    const int ix = static_cast<int>(std::floor((x - min_x) / cell));
    const int iy = static_cast<int>(std::floor((y - min_y) / cell));
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return false;
    return on_track[static_cast<std::size_t>(iy * nx + ix)] != 0;
  }

  // Start pose: start_offset units back along the centerline from gate 0.
  std::pair<Vec2, double> start_pose() const {
    const auto n = points.size();
    std::size_t i = static_cast<std::size_t>(waypoints[0]);
    double remaining = start_offset;
    while (true) {
      const std::size_t j = (i + n - 1) % n;
      const Vec2& a = points[i];
      const Vec2& b = points[j];
      const double l = std::hypot(b.x - a.x, b.y - a.y);
      if (remaining <= l || l == 0.0) {
        const double t = l > 0 ? remaining / l : 0.0;
        const Vec2 p{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
        return {p, std::atan2(a.y - b.y, a.x - b.x)};
      }
      remaining -= l;
      i = j;
    }
  }

  void build_raster() {
    min_x = min_y = std::numeric_limits<double>::infinity();
    double max_x = -min_x;
    double max_y = -min_y;
    for (const auto& p : points) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
    const double pad = width + 2.0;
    min_x -= pad;
    min_y -= pad;
    nx = static_cast<int>(std::ceil((max_x + pad - min_x) / cell));
    ny = static_cast<int>(std::ceil((max_y + pad - min_y) / cell));
    on_track.assign(static_cast<std::size_t>(nx * ny), 0);
    const double h = half_width();
    const auto n = points.size();
    // Rasterize each segment's capsule locally rather than testing all cells
    // against all segments.
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = points[i];
      const Vec2& b = points[(i + 1) % n];
      const int x0 = static_cast<int>(std::floor((std::min(a.x, b.x) - h - min_x) / cell));
      const int x1 = static_cast<int>(std::ceil((std::max(a.x, b.x) + h - min_x) / cell));
      const int y0 = static_cast<int>(std::floor((std::min(a.y, b.y) - h - min_y) / cell));
      const int y1 = static_cast<int>(std::ceil((std::max(a.y, b.y) + h - min_y) / cell));
      const double ex = b.x - a.x;
      const double ey = b.y - a.y;
      const double len2 = ex * ex + ey * ey;
      for (int iy = std::max(0, y0); iy < std::min(ny, y1); ++iy) {
        for (int ix = std::max(0, x0); ix < std::min(nx, x1); ++ix) {
          const double px = min_x + (ix + 0.5) * cell;
          const double py = min_y + (iy + 0.5) * cell;
          double t = len2 > 0 ? ((px - a.x) * ex + (py - a.y) * ey) / len2 : 0.0;
          t = std::clamp(t, 0.0, 1.0);
          if (std::hypot(px - a.x - t * ex, py - a.y - t * ey) <= h) {
            on_track[static_cast<std::size_t>(iy * nx + ix)] = 1;
          }
        }
      }
    }
  }
};

inline Track parse_track(std::string_view text) {
  Track t;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool has_waypoints = false;
  auto fail = [&](const std::string& what) {
    throw FormatError("rally track line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "width") {
      if (!(ls >> t.width) || t.width <= 0) fail("width expects a positive number");
    } else if (kind == "start_offset") {
      if (!(ls >> t.start_offset) || t.start_offset < 0) fail("start_offset expects a non-negative number");
    } else if (kind == "waypoints") {
      for (int& w : t.waypoints) {
        if (!(ls >> w)) fail("waypoints expects 8 indices");
      }
      has_waypoints = true;
    } else if (kind == "point") {
      Vec2 p;
      if (!(ls >> p.x >> p.y)) fail("point expects two numbers");
      t.points.push_back(p);
    } else {
      fail("unknown directive '" + kind + "'");
    }
  }
  if (t.points.size() < 8) throw FormatError("rally track: need at least 8 centerline points");
  if (!has_waypoints) throw FormatError("rally track: missing waypoints directive");
  for (int i = 0; i < kWaypointCount; ++i) {
    const int w = t.waypoints[static_cast<std::size_t>(i)];
    if (w < 0 || w >= static_cast<int>(t.points.size())) throw FormatError("rally track: waypoint index out of range");
    if (i > 0 && w <= t.waypoints[static_cast<std::size_t>(i - 1)]) {
      throw FormatError("rally track: waypoint indices must increase in driving order");
    }
  }
  t.build_raster();
  return t;
}

// The shipped track: a 500-unit oval, two 140-unit straights and two
// 35-unit-radius bends, 12 units wide.
inline constexpr std::string_view kDefaultTrackText = R"(
; Solid Rally track: closed centerline in driving order.
; width W | start_offset D (metres before gate 0) | waypoints i0..i7 | point x y
width 12
start_offset 15
waypoints 0 12 24 36 48 60 72 84
point 0.000000 -35.000000
point 5.207411 -35.000000
point 10.414823 -35.000000
point 15.622234 -35.000000
point 20.829645 -35.000000
point 26.037057 -35.000000
point 31.244468 -35.000000
point 36.451879 -35.000000
point 41.659290 -35.000000
point 46.866702 -35.000000
point 52.074113 -35.000000
point 57.281524 -35.000000
point 62.488936 -35.000000
point 67.696347 -35.000000
point 72.900428 -34.879615
point 78.038760 -34.064326
point 82.999470 -32.496366
point 87.672949 -30.210377
point 91.955932 -27.256871
point 95.753786 -23.701108
point 98.982594 -19.621653
point 101.571012 -15.108646
point 103.461850 -10.261804
point 104.613326 -5.188220
point 105.000000 0.000000
point 104.613326 5.188220
point 103.461850 10.261804
point 101.571012 15.108646
point 98.982594 19.621653
point 95.753786 23.701108
point 91.955932 27.256871
point 87.672949 30.210377
point 82.999470 32.496366
point 78.038760 34.064326
point 72.900428 34.879615
point 67.696347 35.000000
point 62.488936 35.000000
point 57.281524 35.000000
point 52.074113 35.000000
point 46.866702 35.000000
point 41.659290 35.000000
point 36.451879 35.000000
point 31.244468 35.000000
point 26.037057 35.000000
point 20.829645 35.000000
point 15.622234 35.000000
point 10.414823 35.000000
point 5.207411 35.000000
point 0.000000 35.000000
point -5.207411 35.000000
point -10.414823 35.000000
point -15.622234 35.000000
point -20.829645 35.000000
point -26.037057 35.000000
point -31.244468 35.000000
point -36.451879 35.000000
point -41.659290 35.000000
point -46.866702 35.000000
point -52.074113 35.000000
point -57.281524 35.000000
point -62.488936 35.000000
point -67.696347 35.000000
point -72.900428 34.879615
point -78.038760 34.064326
point -82.999470 32.496366
point -87.672949 30.210377
point -91.955932 27.256871
point -95.753786 23.701108
point -98.982594 19.621653
point -101.571012 15.108646
point -103.461850 10.261804
point -104.613326 5.188220
point -105.000000 -0.000000
point -104.613326 -5.188220
point -103.461850 -10.261804
point -101.571012 -15.108646
point -98.982594 -19.621653
point -95.753786 -23.701108
point -91.955932 -27.256871
point -87.672949 -30.210377
point -82.999470 -32.496366
point -78.038760 -34.064326
point -72.900428 -34.879615
point -67.696347 -35.000000
point -62.488936 -35.000000
point -57.281524 -35.000000
point -52.074113 -35.000000
point -46.866702 -35.000000
point -41.659290 -35.000000
point -36.451879 -35.000000
point -31.244468 -35.000000
point -26.037057 -35.000000
point -20.829645 -35.000000
point -15.622234 -35.000000
point -10.414823 -35.000000
point -5.207411 -35.000000
)";

inline Track default_track() { return parse_track(kDefaultTrackText); }

// Seeded closed loop: a perturbed ellipse sampled at 96 points with gates
// every 12 points.
inline Track generate_track(std::uint64_t seed) {
  Rng rng(seed);
  const double rx = 80.0 + rng.uniform(-15.0, 15.0);
  const double ry = 45.0 + rng.uniform(-10.0, 10.0);
  std::array<double, 3> amp{};
  std::array<double, 3> phase{};
  for (std::size_t k = 0; k < amp.size(); ++k) {
    amp[k] = rng.uniform(0.0, 0.08 / static_cast<double>(k + 1));
    phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  std::ostringstream out;
  out.precision(17);
  out << "width 12\nstart_offset 15\nwaypoints 0 12 24 36 48 60 72 84\n";
  for (int i = 0; i < 96; ++i) {
    const double th = -std::numbers::pi / 2 + 2.0 * std::numbers::pi * i / 96.0;
    double f = 1.0;
    for (std::size_t k = 0; k < amp.size(); ++k) f += amp[k] * std::cos((k + 2) * th + phase[k]);
    out << "point " << rx * f * std::cos(th) << ' ' << ry * f * std::sin(th) << '\n';
  }
  return parse_track(out.str());
}

struct RallyState {
  std::shared_ptr<const Track> track;
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  int next_waypoint_index = 0;
  int waypoints_passed = 0;
  int last_waypoint = -1;  // gate to respawn at when stuck; -1 = start
  int stuck_ticks = 0;
  bool blocked = false;    // touched the boundary on the last tick
  double last_distance = 0.0;
  int resets = 0;

  int laps_completed() const { return waypoints_passed / kWaypointCount; }
  bool finished() const { return waypoints_passed >= kWaypointCount * kLaps; }

  bool operator==(const RallyState& o) const {
    return position == o.position && heading == o.heading && speed == o.speed &&
           next_waypoint_index == o.next_waypoint_index && waypoints_passed == o.waypoints_passed &&
           last_waypoint == o.last_waypoint && stuck_ticks == o.stuck_ticks && blocked == o.blocked &&
           last_distance == o.last_distance && resets == o.resets;
  }
};

namespace detail {

inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a > std::numbers::pi) a -= two_pi;
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Segments pq and ab intersect or touch (collinear overlap excluded).
inline bool segments_intersect(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const double d1 = cross(a, b, p);
  const double d2 = cross(a, b, q);
  const double d3 = cross(p, q, a);
  const double d4 = cross(p, q, b);
  return d1 * d2 <= 0.0 && d3 * d4 <= 0.0 && !(d1 == 0.0 && d2 == 0.0);
}

}  // namespace detail

inline RallyState initial_state(std::shared_ptr<const Track> track) {
  RallyState s;
  s.track = std::move(track);
  const auto [p, h] = s.track->start_pose();
  s.position = p;
  s.heading = h;
  return s;
}

// Signed angle from the heading to the next waypoint (positive = to the left).
inline double angle_to_next(const RallyState& s) {
  const auto& t = *s.track;
  const Vec2& w = t.points[static_cast<std::size_t>(t.waypoints[static_cast<std::size_t>(s.next_waypoint_index)])];
  const double bearing = std::atan2(w.y - s.position.y, w.x - s.position.x);
  return detail::wrap_angle(bearing - s.heading);
}

inline double distance_to_next(const RallyState& s) {
  const auto& t = *s.track;
  const Vec2& w = t.points[static_cast<std::size_t>(t.waypoints[static_cast<std::size_t>(s.next_waypoint_index)])];
  return std::hypot(w.x - s.position.x, w.y - s.position.y);
}

// Actions: branch 0 steering (0 left, 1 straight, 2 right), branch 1 pedal
// (0 brake/reverse, 1 coast, 2 accelerate).
inline RallyState rally_tick(RallyState s, const Action& action, double dt, const Params& p = {}) {
  const Track& t = *s.track;
  const int steer = signed_choice(action.discrete.at(0));
  const int pedal = signed_choice(action.discrete.at(1));

  if (pedal > 0) {
    s.speed = std::min(s.speed + p.acceleration * dt, p.max_forward);
  } else if (pedal < 0) {
    s.speed = std::max(s.speed - p.acceleration * dt, -p.max_reverse);
  } else if (s.speed > 0) {
    s.speed = std::max(0.0, s.speed - p.drag * dt);
  } else {
    s.speed = std::min(0.0, s.speed + p.drag * dt);
  }
  const double authority = std::clamp(s.speed / p.full_steer_speed, -1.0, 1.0);
  s.heading = detail::wrap_angle(s.heading - steer * p.steer_rate * authority * dt);

  const Vec2 old = s.position;
  Vec2 next{old.x + s.speed * std::cos(s.heading) * dt, old.y + s.speed * std::sin(s.heading) * dt};
  s.blocked = false;
  double dist = 0.0;
  const Vec2 c = t.nearest_centerline(next, &dist);
  const double limit = t.half_width();
  if (dist > limit) {
    const double k = (limit - 1e-6) / dist;
    next = {c.x + (next.x - c.x) * k, c.y + (next.y - c.y) * k};
    s.speed *= p.wall_scrub;
    s.blocked = true;
  }
  s.position = next;
  s.last_distance = std::hypot(next.x - old.x, next.y - old.y);

  const auto [ga, gb] = t.gate(s.next_waypoint_index);
  const Vec2 tan = t.tangent_at(t.waypoints[static_cast<std::size_t>(s.next_waypoint_index)]);
  const double forward = (next.x - old.x) * tan.x + (next.y - old.y) * tan.y;
  if (forward > 0 && detail::segments_intersect(old, next, ga, gb)) {
    s.last_waypoint = s.next_waypoint_index;
    s.next_waypoint_index = (s.next_waypoint_index + 1) % kWaypointCount;
    ++s.waypoints_passed;
  }

  if (s.blocked && std::abs(s.speed) < p.stuck_speed) {
    ++s.stuck_ticks;
  } else {
    s.stuck_ticks = 0;
  }
  if (s.stuck_ticks >= static_cast<int>(std::lround(p.stuck_seconds / dt))) {
    if (s.last_waypoint < 0) {
      const auto [sp, sh] = t.start_pose();
      s.position = sp;
      s.heading = sh;
    } else {
      const int idx = t.waypoints[static_cast<std::size_t>(s.last_waypoint)];
      s.position = t.points[static_cast<std::size_t>(idx)];
      const Vec2 tg = t.tangent_at(idx);
      s.heading = std::atan2(tg.y, tg.x);
    }
    s.speed = 0.0;
    s.stuck_ticks = 0;
    ++s.resets;
  }
  return s;
}

inline double score_of(const RallyState& s, const RewardParams& r) { return s.waypoints_passed * r.waypoint_value; }

inline double speed_term(const RallyState& s, const RewardParams& r) {
  return std::clamp(s.speed / r.speed_norm, 0.0, 1.0);
}

// 1 facing the next waypoint, 0 facing directly away.
inline double facing_term(const RallyState& s) { return 1.0 - std::abs(angle_to_next(s)) / std::numbers::pi; }

// R_B = dR_E + S * A
inline double rally_behaviour_reward(const RallyState& prev, const RallyState& cur, const RewardParams& r = {}) {
  return score_of(cur, r) - score_of(prev, r) + speed_term(cur, r) * facing_term(cur);
}

// Distance along a ray to the track boundary, sampled on the raster.
inline double boundary_distance(const Track& t, const Vec2& from, double angle, double max_len) {
  const double step = t.cell;
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  for (double d = step; d <= max_len; d += step) {
    if (!t.raster_on_track(from.x + dx * d, from.y + dy * d)) return d - step;
  }
  return max_len;
}

// Empty grid plus 50 properties:
//  0-1   position / track extent     2-3   sin, cos heading
//  4     speed / max forward speed   5     signed angle to next waypoint / pi
//  6     distance to next waypoint / 100 (clamped to 1)
//  7-14  boundary distance along 8 rays (every 45 degrees from the heading) / ray length
//  15-22 next waypoint one-hot       23    laps completed / 3
//  24    remaining time fraction     25-49 zero padding
inline Observation observe_rally(const RallyState& s, double remaining_fraction, const Params& p = {}) {
  const Track& t = *s.track;
  Observation o;
  o.properties.assign(kPropertyCount, 0.0);
  auto& v = o.properties;
  const double extent_x = std::max(std::abs(t.min_x), std::abs(t.min_x + t.nx * t.cell));
  const double extent_y = std::max(std::abs(t.min_y), std::abs(t.min_y + t.ny * t.cell));
  v[0] = s.position.x / extent_x;
  v[1] = s.position.y / extent_y;
  v[2] = std::sin(s.heading);
  v[3] = std::cos(s.heading);
  v[4] = s.speed / p.max_forward;
  v[5] = angle_to_next(s) / std::numbers::pi;
  v[6] = std::min(1.0, distance_to_next(s) / 100.0);
  for (int k = 0; k < kRayCount; ++k) {
    const double a = s.heading + k * std::numbers::pi / 4.0;
    v[static_cast<std::size_t>(7 + k)] = boundary_distance(t, s.position, a, p.ray_length) / p.ray_length;
  }
  v[static_cast<std::size_t>(15 + s.next_waypoint_index)] = 1.0;
  v[23] = static_cast<double>(s.laps_completed()) / kLaps;
  v[24] = remaining_fraction;
  return o;
}

// P = (speed, waypoints passed, |angle to next waypoint|, off-track flag, distance moved this tick)
inline std::vector<double> affect_features(const RallyState& s) {
  return {s.speed, static_cast<double>(s.waypoints_passed), std::abs(angle_to_next(s)), s.blocked ? 1.0 : 0.0,
          s.last_distance};
}

class RallyGame final : public Game {
 public:
  explicit RallyGame(std::shared_ptr<const Track> track = nullptr, RewardParams reward = {}, Params params = {},
                     bool generate_per_seed = false)
      : track_(track ? std::move(track) : std::make_shared<const Track>(default_track())),
        reward_(reward),
        params_(params),
        generate_per_seed_(generate_per_seed) {}

  GameId id() const override { return GameId::SolidRally; }
  ActionSpec action_spec() const override { return {{3, 3}, 0}; }

  void reset(std::uint64_t layout_seed, std::uint64_t /*game_seed*/) override {
    if (generate_per_seed_) track_ = std::make_shared<const Track>(generate_track(layout_seed));
    cur_ = initial_state(track_);
    prev_ = cur_;
  }

  void tick(const Action& action, double dt) override {
    prev_ = cur_;
    cur_ = rally_tick(cur_, action, dt, params_);
  }

  double behaviour_reward() const override { return rally_behaviour_reward(prev_, cur_, reward_); }
  double score() const override { return score_of(cur_, reward_); }
  double max_score() const override { return reward_.max_score; }
  bool goal_reached() const override { return cur_.finished(); }
  BehaviourBounds behaviour_bounds() const override { return {0.0, reward_.waypoint_value + 1.0}; }

  Observation observe(double remaining_fraction) const override {
    return observe_rally(cur_, remaining_fraction, params_);
  }
  int grid_id_count() const override { return 0; }

  std::vector<double> affect_features() const override { return rally::affect_features(cur_); }
  std::vector<std::string> affect_feature_names() const override {
    return {"speed", "waypoints_passed", "angle_to_waypoint", "off_track", "distance_moved"};
  }

  std::unique_ptr<Game> clone() const override { return std::make_unique<RallyGame>(*this); }

  const RallyState& state() const { return cur_; }
  const RallyState& previous_state() const { return prev_; }
  const Track& track() const { return *track_; }

 private:
  std::shared_ptr<const Track> track_;
  RewardParams reward_;
  Params params_;
  bool generate_per_seed_;
  RallyState prev_;
  RallyState cur_;
};

}  // namespace affectively::rally
