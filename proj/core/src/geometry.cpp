#include "gbmr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gbmr {

namespace {

constexpr double kMinTriangleArea = 1e-9;
constexpr double kMinSeparation = 1e-9;
constexpr double kVerticalGuardDeg = 5.0;

double point_rectangle_distance(const Vec3& p, const Rectangle3D& r) {
  const Vec3 q = p - r.center;
  const double a = std::clamp(q.dot(r.u), -r.length / 2, r.length / 2);
  const double b = std::clamp(q.dot(r.v), -r.width / 2, r.width / 2);
  return (p - (r.center + a * r.u + b * r.v)).norm();
}

// Closest distance between segments [p1, q1] and [p2, q2] (Ericson, RTCD 5.1.9).
double segment_segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  constexpr double eps = 1e-15;
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a <= eps && e <= eps) return r.norm();
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > eps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + d1 * s) - (p2 + d2 * t)).norm();
}

bool separated_along(const Vec3& axis, const Rectangle3D& rect, const Vec3& box_center,
                     const std::array<Vec3, 3>& box_axes, const Vec3& h) {
  const double len = axis.norm();
  if (len < 1e-12) return false;
  const Vec3 a = axis / len;
  const double rect_radius = rect.length / 2 * std::abs(rect.u.dot(a)) + rect.width / 2 * std::abs(rect.v.dot(a));
  double box_radius = 0.0;
  for (int i = 0; i < 3; ++i) box_radius += h[i] * std::abs(box_axes[i].dot(a));
  return std::abs((rect.center - box_center).dot(a)) > rect_radius + box_radius;
}

Toolpath triple(const Rectangle3D& rect, const Vec3& cut_normal, double half_span,
                const ToolpathParams& params) {
  const Vec3 x = rect.u;
  const Vec3 z = cut_normal;
  const Vec3 y = z.cross(x).normalized();
  const Quat q = quat_from_frame(x, y, z);
  const double reach = rect.length / 2;
  const Vec3 entry = rect.center - reach * x;
  const Vec3 exit = rect.center + reach * x;
  Toolpath tp;
  tp.targets.push_back({entry, q, MotionKind::approach});
  tp.targets.push_back({exit, q, MotionKind::cut});
  tp.targets.push_back({exit + (half_span + params.retract_clearance) * y, q, MotionKind::retract});
  return tp;
}

}  // namespace

std::string_view to_string(MotionKind k) {
  switch (k) {
    case MotionKind::approach: return "approach";
    case MotionKind::cut: return "cut";
    case MotionKind::retract: return "retract";
  }
  return "unknown";
}

MotionKind parse_motion_kind(std::string_view s) {
  if (s == "approach") return MotionKind::approach;
  if (s == "cut") return MotionKind::cut;
  if (s == "retract") return MotionKind::retract;
  throw Error(ErrorCode::parse_error, "unknown motion kind '" + std::string(s) + "'");
}

std::vector<Vec3> CylinderModel::ring(int which) const {
  const Circle3D& c = which == 0 ? start : end;
  const Vec3 e1 = any_perpendicular(axis);
  const Vec3 e2 = axis.cross(e1);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(tessellation));
  for (int i = 0; i < tessellation; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / tessellation;
    pts.push_back(c.center + c.radius * (std::cos(theta) * e1 + std::sin(theta) * e2));
  }
  return pts;
}

Vec3 HalfLogModel::local(const Vec3& p) const {
  const Vec3 q = p - base_point;
  return {q.dot(axis), q.dot(across()), q.dot(base_normal)};
}

bool HalfLogModel::contains(const Vec3& p, double tol) const {
  const Vec3 l = local(p);
  return l.x() >= -tol && l.x() <= length + tol && l.z() >= -tol &&
         std::hypot(l.y(), l.z()) <= radius + tol;
}

double HalfLogModel::distance(const Vec3& p) const {
  const Vec3 l = local(p);
  const double t = l.y();
  const double h = l.z();
  double cross_section;
  if (h >= 0.0) {
    cross_section = std::max(0.0, std::hypot(t, h) - radius);
  } else {
    cross_section = std::hypot(std::max(std::abs(t) - radius, 0.0), h);
  }
  const double along = std::max({0.0, -l.x(), l.x() - length});
  return std::hypot(cross_section, along);
}

void BoardSpec::validate() const {
  if (!(min_width > 0.0 && min_thickness > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "board minima must be positive");
  }
  if (board_count < 1) throw Error(ErrorCode::invalid_argument, "board_count must be >= 1");
}

std::array<Vec3, 4> Rectangle3D::corners() const {
  const Vec3 du = length / 2 * u;
  const Vec3 dv = width / 2 * v;
  return {center - du - dv, center + du - dv, center + du + dv, center - du + dv};
}

std::array<Vec3, 8> MountBox::corners() const {
  const Vec3 h = half_extents();
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3 local((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(), (i & 4) ? h.z() : -h.z());
    out[static_cast<std::size_t>(i)] = pose.apply(local);
  }
  return out;
}

double MountBox::distance(const Vec3& p) const {
  const Vec3 local = pose.rotation.conjugate() * (p - pose.translation);
  return (local.cwiseAbs() - half_extents()).cwiseMax(0.0).norm();
}

HalvingSurface HalvingSurface::reversed() const {
  HalvingSurface out = *this;
  out.rect.u = -rect.u;
  return out;
}

Circle3D circumcircle(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  const Vec3 a = p2 - p1;
  const Vec3 b = p3 - p1;
  if (a.norm() < kMinSeparation || b.norm() < kMinSeparation || (p3 - p2).norm() < kMinSeparation) {
    throw Error(ErrorCode::degenerate_geometry, "rim points coincide; re-place a point");
  }
  const Vec3 axb = a.cross(b);
  const double area = 0.5 * axb.norm();
  if (area < kMinTriangleArea) {
    throw Error(ErrorCode::degenerate_geometry, "rim points are collinear; re-place a point");
  }
  const Vec3 offset = (a.squaredNorm() * b - b.squaredNorm() * a).cross(axb) / (2.0 * axb.squaredNorm());
  const Vec3 center = p1 + offset;
  return {center, axb.normalized(), offset.norm()};
}

CylinderModel fit_cylinder(const Circle3D& a, const Circle3D& b, int tessellation) {
  const Vec3 d = b.center - a.center;
  const double length = d.norm();
  if (length < kMinSeparation) {
    throw Error(ErrorCode::degenerate_geometry, "end circles share a center; re-place the rim points");
  }
  if (!(a.radius > 0.0 && b.radius > 0.0)) {
    throw Error(ErrorCode::degenerate_geometry, "end circle radius must be positive");
  }
  if (tessellation < 3) throw Error(ErrorCode::invalid_argument, "tessellation must be >= 3");
  const Vec3 axis = d / length;
  CylinderModel cyl;
  cyl.start = {a.center, axis, a.radius};
  cyl.end = {b.center, axis, b.radius};
  cyl.axis = axis;
  cyl.length = length;
  cyl.tessellation = tessellation;
  return cyl;
}

HalvingSurface halving_surface(const CylinderModel& cyl, const ToolpathParams& params) {
  const double guard = std::cos(kVerticalGuardDeg * std::numbers::pi / 180.0);
  if (std::abs(cyl.axis.dot(kWorldUp)) >= guard) {
    throw Error(ErrorCode::orientation_undefined,
                "log axis is within 5 degrees of vertical; re-mount the log");
  }
  const Vec3 normal = cyl.axis.cross(kWorldUp).normalized();
  HalvingSurface s;
  s.rect.center = 0.5 * (cyl.start.center + cyl.end.center);
  s.rect.u = cyl.axis;
  s.rect.v = normal.cross(cyl.axis);
  s.rect.length = cyl.length + 2 * params.overcut_margin;
  s.rect.width = 2 * cyl.max_radius() + 2 * params.overcut_margin;
  s.log_length = cyl.length;
  s.max_radius = cyl.max_radius();
  return s;
}

Toolpath halving_toolpath(const HalvingSurface& surface, const ToolpathParams& params) {
  Toolpath tp = triple(surface.rect, surface.normal(), surface.max_radius, params);
  tp.workflow = "log_halving";
  return tp;
}

HalfLogModel define_half_log(const Vec3& d1, const Vec3& d2, const Vec3& length_point,
                             const Vec3& body_hint) {
  const Vec3 diameter = d2 - d1;
  if (diameter.norm() < kMinSeparation) {
    throw Error(ErrorCode::degenerate_geometry, "diameter points coincide; re-place a point");
  }
  const Vec3 e = diameter.normalized();
  const Vec3 center = 0.5 * (d1 + d2);
  const Vec3 w = length_point - center;
  const Vec3 w_perp = w - w.dot(e) * e;
  const double length = w_perp.norm();
  if (length < kMinSeparation) {
    throw Error(ErrorCode::degenerate_geometry, "length point lies in the end plane; re-place it");
  }
  HalfLogModel log;
  log.base_point = center;
  log.axis = w_perp / length;
  log.radius = diameter.norm() / 2;
  log.length = length;
  log.base_normal = e.cross(log.axis).normalized();
  if (log.base_normal.dot(body_hint) < 0.0) log.base_normal = -log.base_normal;
  return log;
}

double chord_width(double radius, double depth) {
  if (depth < 0.0) throw Error(ErrorCode::invalid_argument, "cut depth must be >= 0");
  if (depth >= radius) throw Error(ErrorCode::zero_width, "cut plane does not intersect the log");
  return 2.0 * std::sqrt(radius * radius - depth * depth);
}

CutPlacement place_cut(const HalfLogModel& log, const Vec3& anchor, const BoardSpec& spec) {
  spec.validate();
  if (log.distance(anchor) > kSnapTolerance + kInclusiveSlack) {
    throw Error(ErrorCode::snap_distance, "cut anchor is more than 50 mm from the log");
  }
  CutPlacement out;
  out.anchor = anchor;
  out.plane_normal = log.base_normal;
  out.spec = spec;
  const double first = log.local(anchor).z();
  const Vec3 v = log.base_normal.cross(log.axis);
  for (int i = 0; i < spec.board_count; ++i) {
    BoardCut b;
    b.depth = first + i * spec.min_thickness;
    b.surface.center = log.base_point + log.length / 2 * log.axis + b.depth * log.base_normal;
    b.surface.u = log.axis;
    b.surface.v = v;
    b.surface.length = log.length;
    // Profile of the round log at this plane; outside the half log when depth < 0.
    b.surface.width = std::abs(b.depth) < log.radius ? chord_width(log.radius, std::abs(b.depth)) : 0.0;
    out.boards.push_back(b);
  }
  return out;
}

double rectangle_box_distance(const Rectangle3D& rect, const MountBox& box) {
  const std::array<Vec3, 3> box_axes = {box.pose.rotation * Vec3::UnitX(),
                                        box.pose.rotation * Vec3::UnitY(),
                                        box.pose.rotation * Vec3::UnitZ()};
  const Vec3 h = box.half_extents();
  const Vec3& bc = box.pose.translation;

  bool separated = separated_along(rect.normal(), rect, bc, box_axes, h);
  for (int i = 0; i < 3 && !separated; ++i) {
    separated = separated_along(box_axes[i], rect, bc, box_axes, h) ||
                separated_along(rect.u.cross(box_axes[i]), rect, bc, box_axes, h) ||
                separated_along(rect.v.cross(box_axes[i]), rect, bc, box_axes, h);
  }
  if (!separated) return 0.0;

  double best = std::numeric_limits<double>::infinity();
  const auto rc = rect.corners();
  for (const Vec3& c : rc) best = std::min(best, box.distance(c));
  const auto bcs = box.corners();
  for (const Vec3& c : bcs) best = std::min(best, point_rectangle_distance(c, rect));
  for (int i = 0; i < 4; ++i) {
    const Vec3& a0 = rc[static_cast<std::size_t>(i)];
    const Vec3& a1 = rc[static_cast<std::size_t>((i + 1) % 4)];
    for (int j = 0; j < 8; ++j) {
      for (int bit = 1; bit < 8; bit <<= 1) {
        if (j & bit) continue;
        best = std::min(best, segment_segment_distance(a0, a1, bcs[static_cast<std::size_t>(j)],
                                                       bcs[static_cast<std::size_t>(j | bit)]));
      }
    }
  }
  return best;
}

ValidationResult validate_cut(const CutPlacement& placement, const HalfLogModel& log,
                              std::span<const MountBox> mounts, double clearance) {
  ValidationResult result;
  std::ostringstream why;
  for (std::size_t i = 0; i < placement.boards.size(); ++i) {
    const BoardCut& b = placement.boards[i];
    BoardCheck check;
    const auto corners = b.surface.corners();
    check.inside_boundary =
        std::all_of(corners.begin(), corners.end(), [&](const Vec3& c) { return log.contains(c); });
    check.clear_of_mounts = true;
    for (const MountBox& m : mounts) {
      if (rectangle_box_distance(b.surface, m) < clearance) check.clear_of_mounts = false;
    }
    check.width_ok = b.depth >= 0.0 && b.depth < log.radius &&
                     chord_width(log.radius, b.depth) >= placement.spec.min_width;
    if (!check.inside_boundary) why << " board " << i + 1 << " outside the log;";
    if (!check.clear_of_mounts) why << " board " << i + 1 << " too close to a mount;";
    if (!check.width_ok) why << " board " << i + 1 << " narrower than the minimum width;";
    result.boards.push_back(check);
  }
  result.pass = !result.boards.empty() &&
                std::all_of(result.boards.begin(), result.boards.end(), [](const BoardCheck& c) { return c.ok(); });
  if (result.pass) {
    result.notation = NotationState::green("cut placement valid");
  } else {
    std::string msg = why.str();
    if (!msg.empty() && msg.front() == ' ') msg.erase(0, 1);
    if (!msg.empty() && msg.back() == ';') msg.pop_back();
    result.notation = NotationState::red(msg.empty() ? "no boards placed" : msg);
  }
  return result;
}

Toolpath cut_toolpath(const CutPlacement& placement, const ValidationResult& validation,
                      const ToolpathParams& params) {
  if (!validation.pass || validation.boards.size() != placement.boards.size()) {
    throw Error(ErrorCode::unvalidated_placement, "cut placement has not passed validation");
  }
  Toolpath tp;
  tp.workflow = "half_log_cutting";
  for (auto it = placement.boards.rbegin(); it != placement.boards.rend(); ++it) {
    Rectangle3D cut = it->surface;
    cut.length += 2 * params.overcut_margin;
    const Toolpath t = triple(cut, placement.plane_normal, it->surface.width / 2, params);
    tp.targets.insert(tp.targets.end(), t.targets.begin(), t.targets.end());
  }
  return tp;
}

}  // namespace gbmr
