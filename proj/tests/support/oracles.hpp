#pragma once

// Reference implementations the production code is checked against. They are
// written independently of core/src: brute force, sampling, or a different
// formulation of the same quantity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "gbmr/calibration.hpp"
#include "gbmr/geometry.hpp"
#include "gbmr/identification.hpp"

namespace gbmr::oracle {

// ---------------------------------------------------------------------------
// Circles

/// Circumcenter by solving the 3x3 system |c - p_i|^2 equal for all i, with c
/// constrained to the plane of the points.
inline Circle3D circle_by_linear_solve(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  const Vec3 n = (p2 - p1).cross(p3 - p1);
  Mat3 a;
  a.row(0) = 2.0 * (p2 - p1).transpose();
  a.row(1) = 2.0 * (p3 - p1).transpose();
  a.row(2) = n.transpose();
  const Vec3 b(p2.squaredNorm() - p1.squaredNorm(), p3.squaredNorm() - p1.squaredNorm(), n.dot(p1));
  const Vec3 c = a.fullPivLu().solve(b);
  return {c, n.normalized(), (c - p1).norm()};
}

// ---------------------------------------------------------------------------
// Half-log solid and mount boxes, point queries

/// Signed-ish depth test: true when `p` lies in the half cylinder (flat face
/// on the base plane, body on the +normal side) within `tol`.
inline bool in_half_log(const HalfLogModel& log, const Vec3& p, double tol) {
  const Vec3 d = p - log.base_point;
  const double s = d.dot(log.axis);
  const double h = d.dot(log.base_normal);
  const Vec3 radial = d - s * log.axis;
  return s >= -tol && s <= log.length + tol && h >= -tol && radial.norm() <= log.radius + tol;
}

/// Distance from `p` to the solid box, via clamping in the box frame.
inline double point_box_distance(const Vec3& p, const MountBox& box) {
  const Mat3 r = box.pose.rotation.toRotationMatrix();
  const Vec3 local = r.transpose() * (p - box.pose.translation);
  const Vec3 h(box.cross_section / 2, box.cross_section / 2, box.depth / 2);
  Vec3 clamped;
  for (int i = 0; i < 3; ++i) clamped[i] = std::clamp(local[i], -h[i], h[i]);
  return (local - clamped).norm();
}

/// Minimum rectangle-to-box distance. Monte-Carlo samples over the rectangle
/// (corners and edges always included), then a compass search from the best
/// few samples. Distance to a convex set composed with an affine map is convex
/// in (a, b), so the search converges to the global minimum.
inline double sampled_rectangle_box_distance(const Rectangle3D& rect, const MountBox& box, int samples,
                                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Sample {
    double a, b, d;
  };
  std::vector<Sample> s;
  s.reserve(static_cast<std::size_t>(samples) + 16);
  auto eval = [&](double a, double b) { return point_box_distance(rect.at(a, b), box); };
  for (double a : {0.0, 0.5, 1.0}) {
    for (double b : {0.0, 0.5, 1.0}) s.push_back({a, b, eval(a, b)});
  }
  for (int i = 0; i < samples; ++i) {
    double a = unit(rng);
    double b = unit(rng);
    // A quarter of the samples land on the boundary.
    switch (i % 8) {
      case 0: a = 0.0; break;
      case 1: a = 1.0; break;
      default: break;
    }
    s.push_back({a, b, eval(a, b)});
  }
  std::partial_sort(s.begin(), s.begin() + 4, s.end(), [](const Sample& x, const Sample& y) { return x.d < y.d; });
  double best = s.front().d;
  for (int k = 0; k < 4 && best > 0.0; ++k) {
    double a = s[static_cast<std::size_t>(k)].a;
    double b = s[static_cast<std::size_t>(k)].b;
    double d = s[static_cast<std::size_t>(k)].d;
    double step = 0.25;
    while (step > 1e-13) {
      bool moved = false;
      for (const auto& [da, db] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0},
                                   {1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}}) {
        const double na = std::clamp(a + da * step, 0.0, 1.0);
        const double nb = std::clamp(b + db * step, 0.0, 1.0);
        const double nd = eval(na, nb);
        if (nd < d) {
          a = na;
          b = nb;
          d = nd;
          moved = true;
        }
      }
      if (!moved) step /= 2;
    }
    best = std::min(best, d);
  }
  return best;
}

struct CutOracleResult {
  bool pass = false;
  std::vector<BoardCheck> boards;
  /// Smallest distance of any deciding quantity to its threshold; how close
  /// the instance is to a geometric boundary.
  double boundary_margin = std::numeric_limits<double>::infinity();
};

/// Sampling oracle for validate_cut.
inline CutOracleResult validate_cut_by_sampling(const CutPlacement& placement, const HalfLogModel& log,
                                                std::span<const MountBox> mounts, double clearance,
                                                int samples_per_rect, std::mt19937_64& rng) {
  CutOracleResult out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const BoardCut& b : placement.boards) {
    const Rectangle3D& r = b.surface;
    BoardCheck c;

    // (a) inside: every sampled point of the rectangle inside the solid.
    bool inside = true;
    double worst_excess = -std::numeric_limits<double>::infinity();
    auto probe = [&](double a, double bb) {
      const Vec3 p = r.at(a, bb);
      if (!in_half_log(log, p, 1e-9)) inside = false;
      const Vec3 d = p - log.base_point;
      const double s = d.dot(log.axis);
      const double h = d.dot(log.base_normal);
      const double radial = (d - s * log.axis).norm();
      const double excess = std::max({-s, s - log.length, -h, radial - log.radius});
      worst_excess = std::max(worst_excess, excess);
    };
    for (double a : {0.0, 1.0}) {
      for (double bb : {0.0, 1.0}) probe(a, bb);
    }
    for (int i = 0; i < samples_per_rect / 4; ++i) probe(unit(rng), unit(rng));
    c.inside_boundary = inside;
    out.boundary_margin = std::min(out.boundary_margin, std::abs(worst_excess));

    // (b) clearance to every mount.
    c.clear_of_mounts = true;
    for (const MountBox& m : mounts) {
      const double d = sampled_rectangle_box_distance(r, m, samples_per_rect, rng);
      if (d < clearance) c.clear_of_mounts = false;
      out.boundary_margin = std::min(out.boundary_margin, std::abs(d - clearance));
    }

    // (c) chord width at this depth.
    const double depth = b.depth;
    const double disc = log.radius * log.radius - depth * depth;
    const double chord = disc > 0.0 ? 2.0 * std::sqrt(disc) : 0.0;
    c.width_ok = depth >= 0.0 && disc > 0.0 && chord >= placement.spec.min_width;
    out.boundary_margin = std::min({out.boundary_margin, std::abs(depth), std::abs(log.radius - depth),
                                    std::abs(chord - placement.spec.min_width)});
    out.boards.push_back(c);
  }
  out.pass = !out.boards.empty() &&
             std::all_of(out.boards.begin(), out.boards.end(), [](const BoardCheck& c) {
               return c.inside_boundary && c.clear_of_mounts && c.width_ok;
             });
  return out;
}

// ---------------------------------------------------------------------------
// Catalog matching

struct ScanMatch {
  enum class Kind { hit, none, ambiguous } kind = Kind::none;
  double nominal = 0.0;
};

/// Linear scan over every entry: the set of distinct nominals within
/// tolerance decides the outcome.
inline ScanMatch scan_lengths(const std::vector<double>& all_nominals, double measured, double tol) {
  std::vector<double> within;
  for (double n : all_nominals) {
    if (std::abs(n - measured) <= tol + kInclusiveSlack &&
        std::find(within.begin(), within.end(), n) == within.end()) {
      within.push_back(n);
    }
  }
  if (within.empty()) return {};
  if (within.size() > 1) return {ScanMatch::Kind::ambiguous, 0.0};
  return {ScanMatch::Kind::hit, within.front()};
}

// ---------------------------------------------------------------------------
// Nearest neighbour

/// Index of the nearest board by brute force; exact-distance ties (within
/// 1e-9) resolve to the lowest id.
inline std::size_t nearest_board(const Vec3& p, std::span<const BoardReference> boards) {
  std::vector<double> d;
  for (const BoardReference& b : boards) d.push_back(std::sqrt((p - b.center).array().square().sum()));
  const double lo = *std::min_element(d.begin(), d.end());
  std::size_t best = boards.size();
  for (std::size_t i = 0; i < boards.size(); ++i) {
    if (d[i] <= lo + 1e-9 && (best == boards.size() || boards[i].id < boards[best].id)) best = i;
  }
  return best;
}

}  // namespace gbmr::oracle
