#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gbmr {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;

/// Monotonic milliseconds.
using TimestampMs = std::int64_t;

inline constexpr double kMetersPerInch = 0.0254;

/// Slack applied to inclusive tolerance comparisons so that values constructed
/// as `nominal + tol` in floating point still land inside the band.
inline constexpr double kInclusiveSlack = 1e-12;

constexpr double inches(double value) { return value * kMetersPerInch; }

inline bool within_tolerance(double deviation, double tolerance) {
  return deviation <= tolerance + kInclusiveSlack;
}

/// Machine-readable error categories. The string form is what goes over the
/// wire and into CLI error lines.
enum class ErrorCode {
  invalid_argument,
  invalid_frame,
  out_of_order,
  degenerate_geometry,
  orientation_undefined,
  zero_width,
  snap_distance,
  unvalidated_placement,
  no_match,
  ambiguous_match,
  all_assigned,
  below_ground,
  invalid_catalog,
  non_rigid_transform,
  parse_error,
  protocol_error,
  workflow_phase,
  nothing_to_undo,
  io_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Rotation followed by translation: p_world = rotation * p_local + translation.
struct RigidTransform {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_direction(const Vec3& d) const { return rotation * d; }

  RigidTransform compose(const RigidTransform& inner) const {
    return {rotation * inner.rotation, rotation * inner.translation + translation};
  }

  /// Throws non_rigid_transform unless the quaternion is unit within 1e-6 and
  /// every component is finite.
  void validate() const;

  friend bool operator==(const RigidTransform& a, const RigidTransform& b) {
    return a.rotation.coeffs() == b.rotation.coeffs() && a.translation == b.translation;
  }
};

/// Flips the quaternion into the w >= 0 hemisphere so equal rotations serialize
/// identically.
Quat canonical(const Quat& q);

/// Quaternion for the frame whose columns are x, y, z (assumed orthonormal,
/// right-handed).
Quat quat_from_frame(const Vec3& x, const Vec3& y, const Vec3& z);

bool all_finite(const Vec3& v);

/// Any unit vector perpendicular to `n`; deterministic for a given input.
Vec3 any_perpendicular(const Vec3& n);

struct Plane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();

  double signed_distance(const Vec3& p) const { return normal.dot(p - point); }
  Vec3 project(const Vec3& p) const { return p - signed_distance(p) * normal; }
};

struct Line {
  Vec3 point = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();

  double parameter(const Vec3& p) const { return direction.dot(p - point); }
  Vec3 project(const Vec3& p) const { return point + parameter(p) * direction; }

  friend bool operator==(const Line&, const Line&) = default;
};

}  // namespace gbmr
