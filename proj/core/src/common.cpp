#include "gbmr/common.hpp"

#include <cmath>

namespace gbmr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_frame: return "invalid_frame";
    case ErrorCode::out_of_order: return "out_of_order";
    case ErrorCode::degenerate_geometry: return "degenerate_geometry";
    case ErrorCode::orientation_undefined: return "orientation_undefined";
    case ErrorCode::zero_width: return "zero_width";
    case ErrorCode::snap_distance: return "snap_distance";
    case ErrorCode::unvalidated_placement: return "unvalidated_placement";
    case ErrorCode::no_match: return "no_match";
    case ErrorCode::ambiguous_match: return "ambiguous_match";
    case ErrorCode::all_assigned: return "all_assigned";
    case ErrorCode::below_ground: return "below_ground";
    case ErrorCode::invalid_catalog: return "invalid_catalog";
    case ErrorCode::non_rigid_transform: return "non_rigid_transform";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::protocol_error: return "protocol_error";
    case ErrorCode::workflow_phase: return "workflow_phase";
    case ErrorCode::nothing_to_undo: return "nothing_to_undo";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

void RigidTransform::validate() const {
  if (!rotation.coeffs().allFinite() || !all_finite(translation)) {
    throw Error(ErrorCode::non_rigid_transform, "transform has non-finite components");
  }
  if (std::abs(rotation.norm() - 1.0) > 1e-6) {
    throw Error(ErrorCode::non_rigid_transform, "rotation quaternion is not unit length");
  }
}

Quat canonical(const Quat& q) {
  if (q.w() < 0.0) return Quat(-q.w(), -q.x(), -q.y(), -q.z());
  return q;
}

Quat quat_from_frame(const Vec3& x, const Vec3& y, const Vec3& z) {
  Mat3 m;
  m.col(0) = x;
  m.col(1) = y;
  m.col(2) = z;
  Quat q(m);
  q.normalize();
  return canonical(q);
}

bool all_finite(const Vec3& v) { return v.allFinite(); }

Vec3 any_perpendicular(const Vec3& n) {
  // Cross with the world axis least aligned with n.
  const Vec3 a = n.cwiseAbs();
  Vec3 helper = Vec3::UnitX();
  if (a.y() <= a.x() && a.y() <= a.z()) {
    helper = Vec3::UnitY();
  } else if (a.z() <= a.x() && a.z() <= a.y()) {
    helper = Vec3::UnitZ();
  }
  return n.cross(helper).normalized();
}

}  // namespace gbmr
