#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbmr/common.hpp"
#include "gbmr/notation.hpp"

namespace gbmr {

inline const Vec3 kWorldUp = Vec3::UnitZ();

struct Circle3D {
  Vec3 center = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double radius = 0.0;

  friend bool operator==(const Circle3D&, const Circle3D&) = default;
};

/// Frustum between two end circles; rings are perpendicular to the axis.
struct CylinderModel {
  Circle3D start;
  Circle3D end;
  Vec3 axis = Vec3::UnitX();
  double length = 0.0;
  int tessellation = 32;

  double max_radius() const { return std::max(start.radius, end.radius); }

  /// Two rings of `tessellation` vertices each; ring 0 around `start`.
  std::vector<Vec3> ring(int which) const;

  friend bool operator==(const CylinderModel&, const CylinderModel&) = default;
};

/// Half-cylinder lying on its flat sawn face. The body occupies the side of the
/// base plane that `base_normal` points into.
struct HalfLogModel {
  Vec3 base_point = Vec3::Zero();  ///< end-face center on the flat face
  Vec3 base_normal = Vec3::UnitZ();
  Vec3 axis = Vec3::UnitX();
  double radius = 0.0;
  double length = 0.0;

  /// In-plane direction across the flat face.
  Vec3 across() const { return axis.cross(base_normal); }

  /// Local coordinates (along axis, across, depth above base plane).
  Vec3 local(const Vec3& p) const;

  bool contains(const Vec3& p, double tol = 1e-9) const;

  /// Euclidean distance from `p` to the solid; zero inside.
  double distance(const Vec3& p) const;

  friend bool operator==(const HalfLogModel&, const HalfLogModel&) = default;
};

struct BoardSpec {
  double min_width = inches(5.0);
  double min_thickness = inches(0.75);
  int board_count = 3;

  void validate() const;

  friend bool operator==(const BoardSpec&, const BoardSpec&) = default;
};

/// Planar rectangle: center, unit in-plane directions `u` and `v`, and full
/// extents along each.
struct Rectangle3D {
  Vec3 center = Vec3::Zero();
  Vec3 u = Vec3::UnitX();
  Vec3 v = Vec3::UnitY();
  double length = 0.0;  ///< extent along u
  double width = 0.0;   ///< extent along v

  Vec3 normal() const { return u.cross(v); }
  std::array<Vec3, 4> corners() const;
  Vec3 at(double a, double b) const { return center + (a - 0.5) * length * u + (b - 0.5) * width * v; }

  friend bool operator==(const Rectangle3D&, const Rectangle3D&) = default;
};

struct BoardCut {
  double depth = 0.0;  ///< offset of the plane from the base plane
  Rectangle3D surface;

  friend bool operator==(const BoardCut&, const BoardCut&) = default;
};

struct CutPlacement {
  Vec3 anchor = Vec3::Zero();
  Vec3 plane_normal = Vec3::UnitZ();
  std::vector<BoardCut> boards;  ///< increasing depth
  BoardSpec spec;

  friend bool operator==(const CutPlacement&, const CutPlacement&) = default;
};

/// Oriented box. Local x/y span the cross-section, local z the depth.
struct MountBox {
  RigidTransform pose;
  double cross_section = inches(4.0);
  double depth = 0.3;

  Vec3 half_extents() const { return {cross_section / 2, cross_section / 2, depth / 2}; }
  std::array<Vec3, 8> corners() const;
  double distance(const Vec3& p) const;

  friend bool operator==(const MountBox&, const MountBox&) = default;
};

enum class MotionKind : std::uint8_t { approach, cut, retract };

std::string_view to_string(MotionKind k);
MotionKind parse_motion_kind(std::string_view s);

/// Posed target. Frame convention: X = cut travel, Z = cut-plane normal,
/// Y = Z x X.
struct RobotTarget {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  MotionKind kind = MotionKind::approach;

  Vec3 x_axis() const { return orientation * Vec3::UnitX(); }
  Vec3 y_axis() const { return orientation * Vec3::UnitY(); }
  Vec3 z_axis() const { return orientation * Vec3::UnitZ(); }

  friend bool operator==(const RobotTarget& a, const RobotTarget& b) {
    return a.position == b.position && a.orientation.coeffs() == b.orientation.coeffs() &&
           a.kind == b.kind;
  }
};

struct Toolpath {
  std::vector<RobotTarget> targets;
  std::string workflow;
  std::string log_id;

  friend bool operator==(const Toolpath&, const Toolpath&) = default;
};

struct BoardCheck {
  bool inside_boundary = false;
  bool clear_of_mounts = false;
  bool width_ok = false;

  bool ok() const { return inside_boundary && clear_of_mounts && width_ok; }

  friend bool operator==(const BoardCheck&, const BoardCheck&) = default;
};

struct ValidationResult {
  bool pass = false;
  std::vector<BoardCheck> boards;
  NotationState notation;

  friend bool operator==(const ValidationResult&, const ValidationResult&) = default;
};

struct ToolpathParams {
  double overcut_margin = 0.05;
  double retract_clearance = 0.15;
};

/// Cutting plane through the middle of a cylinder.
struct HalvingSurface {
  Rectangle3D rect;  ///< u along the log axis, normal = u x v
  double log_length = 0.0;
  double max_radius = 0.0;

  Vec3 normal() const { return rect.normal(); }

  /// Same plane and extents, traversed in the opposite direction.
  HalvingSurface reversed() const;

  friend bool operator==(const HalvingSurface&, const HalvingSurface&) = default;
};

/// Circle through three points; the normal follows (p2 - p1) x (p3 - p1).
/// Throws degenerate_geometry for coincident or collinear points (triangle
/// area below 1e-9 m^2).
Circle3D circumcircle(const Vec3& p1, const Vec3& p2, const Vec3& p3);

CylinderModel fit_cylinder(const Circle3D& a, const Circle3D& b, int tessellation = 32);

/// Vertical plane containing the cylinder axis. Throws orientation_undefined
/// when the axis is within 5 degrees of world up.
HalvingSurface halving_surface(const CylinderModel& cyl, const ToolpathParams& params = {});

Toolpath halving_toolpath(const HalvingSurface& surface, const ToolpathParams& params = {});

/// `body_hint` selects which side of the flat face the half log occupies; the
/// base normal is oriented to have a non-negative component along it.
HalfLogModel define_half_log(const Vec3& d1, const Vec3& d2, const Vec3& length_point,
                             const Vec3& body_hint = kWorldUp);

double chord_width(double radius, double depth);

inline constexpr double kSnapTolerance = 0.05;

CutPlacement place_cut(const HalfLogModel& log, const Vec3& anchor, const BoardSpec& spec);

inline constexpr double kDefaultMountClearance = inches(1.0);

ValidationResult validate_cut(const CutPlacement& placement, const HalfLogModel& log,
                              std::span<const MountBox> mounts,
                              double clearance = kDefaultMountClearance);

/// One approach/cut/retract triple per board, deepest plane first. Throws
/// unvalidated_placement unless `validation` passed for this placement.
Toolpath cut_toolpath(const CutPlacement& placement, const ValidationResult& validation,
                      const ToolpathParams& params = {});

/// Exact minimum distance between a rectangle and an oriented box (zero when
/// they intersect).
double rectangle_box_distance(const Rectangle3D& rect, const MountBox& box);

}  // namespace gbmr
