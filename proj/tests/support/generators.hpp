#pragma once

// Seeded random instances shared by the unit tests, the acceptance suite and
// the benchmarks.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gbmr/protocol.hpp"
#include "gbmr/synthetic_hand.hpp"

namespace gbmr::gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Vec3 vec(Rng& rng, double lo, double hi) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline Vec3 unit_vec(Rng& rng) {
  std::normal_distribution<double> n;
  Vec3 v;
  do {
    v = {n(rng), n(rng), n(rng)};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Quat rotation(Rng& rng) {
  std::normal_distribution<double> n;
  Quat q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

inline Quat yaw(Rng& rng) {
  return Quat(Eigen::AngleAxisd(uniform(rng, -std::numbers::pi, std::numbers::pi), Vec3::UnitZ()));
}

inline RigidTransform rigid(Rng& rng, double reach = 5.0) { return {rotation(rng), vec(rng, -reach, reach)}; }

/// Unit vectors e1, e2 spanning the plane perpendicular to `n`.
inline std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  const Vec3 e1 = (std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(n).normalized();
  return {e1, n.cross(e1)};
}

inline Vec3 on_circle(const Vec3& center, const Vec3& normal, double radius, double theta) {
  const auto [e1, e2] = plane_basis(normal);
  return center + radius * (std::cos(theta) * e1 + std::sin(theta) * e2);
}

/// Three angles pairwise at least `min_gap` apart on the circle.
inline std::array<double, 3> spread_angles(Rng& rng, double min_gap = 0.35) {
  for (;;) {
    std::array<double, 3> a{uniform(rng, 0, 2 * std::numbers::pi), uniform(rng, 0, 2 * std::numbers::pi),
                            uniform(rng, 0, 2 * std::numbers::pi)};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const double d = std::remainder(a[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(j)],
                                        2 * std::numbers::pi);
        if (std::abs(d) < min_gap) ok = false;
      }
    }
    if (ok) return a;
  }
}

// ---------------------------------------------------------------------------
// Cut placements

struct CutInstance {
  HalfLogModel log;
  CutPlacement placement;
  std::vector<MountBox> mounts;
  double clearance = kDefaultMountClearance;
};

/// Random half log in a random pose, an anchor near its body, and mounts
/// scattered around it. Some board rectangles are perturbed off the chord so
/// the inside test is exercised in both directions.
inline CutInstance cut_instance(Rng& rng) {
  CutInstance c;
  const Quat pose = rotation(rng);
  const Vec3 origin = vec(rng, -2.0, 2.0);
  c.log.radius = uniform(rng, 0.08, 0.3);
  c.log.length = uniform(rng, 0.8, 3.0);
  c.log.axis = pose * Vec3::UnitX();
  c.log.base_normal = pose * Vec3::UnitZ();
  c.log.base_point = origin;

  BoardSpec spec;
  spec.board_count = uniform_int(rng, 1, 4);
  spec.min_thickness = uniform(rng, 0.01, 0.05);
  spec.min_width = coin(rng, 0.8) ? inches(5.0) : uniform(rng, 0.05, 0.3);

  const Vec3 anchor = origin + uniform(rng, -0.03, c.log.length + 0.03) * c.log.axis +
                      uniform(rng, -c.log.radius, c.log.radius) * c.log.across() +
                      uniform(rng, -0.04, c.log.radius * 0.9) * c.log.base_normal;
  if (c.log.distance(anchor) > kSnapTolerance) {
    c.placement = place_cut(c.log, origin + c.log.length / 2 * c.log.axis, spec);
  } else {
    c.placement = place_cut(c.log, anchor, spec);
  }
  for (BoardCut& b : c.placement.boards) {
    if (!coin(rng, 0.25)) continue;
    b.surface.center += uniform(rng, -0.05, 0.05) * b.surface.u + uniform(rng, -0.05, 0.05) * b.surface.v;
    b.surface.length *= uniform(rng, 0.8, 1.02);
    b.surface.width *= uniform(rng, 0.7, 1.02);
  }

  const int mounts = uniform_int(rng, 0, 3);
  for (int i = 0; i < mounts; ++i) {
    MountBox m;
    m.cross_section = inches(4.0);
    m.depth = uniform(rng, 0.1, 0.4);
    const double along = uniform(rng, -0.1, c.log.length + 0.1);
    const double below = uniform(rng, 0.0, 0.3);
    const Vec3 center = origin + along * c.log.axis - (m.cross_section / 2 + below) * c.log.base_normal +
                        uniform(rng, -0.1, 0.1) * c.log.across();
    const Quat tilt(Eigen::AngleAxisd(uniform(rng, -0.4, 0.4), unit_vec(rng)));
    m.pose = {tilt * pose * Quat(Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitY())), center};
    c.mounts.push_back(m);
  }
  c.clearance = coin(rng, 0.7) ? kDefaultMountClearance : uniform(rng, 0.0, 0.2);
  return c;
}

// ---------------------------------------------------------------------------
// Protocol messages

inline std::string text(Rng& rng) {
  static const std::vector<std::string> pieces = {"place", " rim", " point", " \"quoted\"", " tab\t", " \\ slash",
                                                  " newline\n", " ü", " 1:10", " ✓", "", " 50.0 mm"};
  std::string s;
  const int n = uniform_int(rng, 0, 5);
  for (int i = 0; i < n; ++i) s += pieces[static_cast<std::size_t>(uniform_int(rng, 0, int(pieces.size()) - 1))];
  return s;
}

inline double number(Rng& rng) {
  switch (uniform_int(rng, 0, 5)) {
    case 0: return 0.0;
    case 1: return -0.0;
    case 2: return uniform(rng, -1e-12, 1e-12);
    case 3: return uniform(rng, -1e6, 1e6);
    case 4: return std::ldexp(uniform(rng, -1.0, 1.0), uniform_int(rng, -60, 60));
    default: return uniform(rng, -3.0, 3.0);
  }
}

inline Vec3 numbers3(Rng& rng) { return {number(rng), number(rng), number(rng)}; }

inline Json json_value(Rng& rng, int depth = 0) {
  switch (uniform_int(rng, 0, depth > 2 ? 4 : 6)) {
    case 0: return nullptr;
    case 1: return coin(rng);
    case 2: return uniform_int(rng, -1000000, 1000000);
    case 3: return number(rng);
    case 4: return text(rng);
    case 5: {
      Json a = Json::array();
      for (int i = uniform_int(rng, 0, 4); i > 0; --i) a.push_back(json_value(rng, depth + 1));
      return a;
    }
    default: {
      Json o = Json::object();
      for (int i = uniform_int(rng, 0, 4); i > 0; --i) o["k" + std::to_string(uniform_int(rng, 0, 99))] = json_value(rng, depth + 1);
      return o;
    }
  }
}

inline HandFrame hand_frame(Rng& rng, TimestampMs t) {
  JointArray joints;
  for (JointPose& j : joints) {
    j.position = numbers3(rng);
    j.orientation = rotation(rng);
  }
  return HandFrame(t, coin(rng) ? Handedness::left : Handedness::right, joints, uniform(rng, 0.0, 1.0));
}

inline InputEvent input_event(Rng& rng) {
  const TimestampMs t = uniform_int(rng, 0, 2000000000);
  switch (uniform_int(rng, 0, 2)) {
    case 0: return InputEvent::frame(hand_frame(rng, t));
    case 1: return {t, AnchorPose{{rotation(rng), numbers3(rng)}}};
    default: {
      Command c;
      c.kind = static_cast<CommandKind>(uniform_int(rng, 0, 4));
      if (coin(rng)) c.name = "p" + std::to_string(uniform_int(rng, 0, 9));
      if (coin(rng)) c.value = json_value(rng);
      return {t, c};
    }
  }
}

inline NotationState notation(Rng& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0: return NotationState::green(text(rng));
    case 1: return NotationState::yellow(text(rng));
    default: return NotationState::red(text(rng));
  }
}

inline Toolpath toolpath(Rng& rng) {
  Toolpath tp;
  for (int i = uniform_int(rng, 0, 9); i > 0; --i) {
    tp.targets.push_back({numbers3(rng), rotation(rng), static_cast<MotionKind>(uniform_int(rng, 0, 2))});
  }
  tp.workflow = coin(rng) ? "log_halving" : "half_log_cutting";
  tp.log_id = text(rng);
  return tp;
}

inline IdentificationResult identification(Rng& rng) {
  IdentificationResult r;
  r.kind = coin(rng) ? IdentifiedKind::layer : IdentifiedKind::tube;
  r.entry = uniform_int(rng, 0, 60);
  r.nominal = number(rng);
  r.measured = number(rng);
  r.deviation = std::abs(number(rng));
  r.payload.frame_pose = {rotation(rng), numbers3(rng)};
  if (coin(rng)) r.payload.tower_pose = RigidTransform{rotation(rng), numbers3(rng)};
  r.payload.scale_hint = coin(rng) ? 1.0 : kTowerScaleHint;
  r.payload.notation = text(rng);
  for (int i = uniform_int(rng, 0, 5); i > 0; --i) r.outline.push_back(numbers3(rng));
  for (int i = uniform_int(rng, 0, 3); i > 0; --i) r.holes.push_back(numbers3(rng));
  return r;
}

inline SceneUpdate scene_update(Rng& rng) {
  SceneUpdate u;
  u.revision = std::uniform_int_distribution<std::uint64_t>(0, ~std::uint64_t{0})(rng);
  switch (uniform_int(rng, 0, 5)) {
    case 0: u.body = GeometryAdded{text(rng), text(rng), json_value(rng)}; break;
    case 1: u.body = NotationUpdate{text(rng), notation(rng)}; break;
    case 2: u.body = Instruction{text(rng)}; break;
    case 3: u.body = ToolpathReady{text(rng), toolpath(rng)}; break;
    case 4: u.body = IdentificationUpdate{identification(rng)}; break;
    default: u.body = ErrorUpdate{std::string(to_string(static_cast<ErrorCode>(uniform_int(rng, 0, 18)))), text(rng)};
  }
  return u;
}

// ---------------------------------------------------------------------------
// Scripted sessions

/// Six rim taps on a horizontal log of radius `r` from x = 0 to x = `length`.
inline GestureLog log_halving_session(double length = 2.0, double r = 0.15, double height = 0.5,
                                      const Quat& yaw_rotation = Quat::Identity()) {
  SyntheticHand hand;
  const Vec3 c0(0.0, 0.0, height);
  const std::array<double, 6> degrees = {200.0, 90.0, -20.0, 160.0, 70.0, 10.0};
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const double th = degrees[i] * std::numbers::pi / 180.0;
    const Vec3 p(i < 3 ? 0.0 : length, r * std::cos(th), height + r * std::sin(th));
    hand.tap(yaw_rotation * (p - c0) + c0);
  }
  return hand.log(WorkflowKind::log_halving);
}

}  // namespace gbmr::gen
