#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gbmr/common.hpp"
#include "gbmr/notation.hpp"

namespace gbmr {

/// Ground established by the anchor pose: the anchor's local XY plane, with
/// local Z as the upward normal.
struct GroundPlane {
  RigidTransform frame;

  Vec3 point() const { return frame.translation; }
  Vec3 normal() const { return frame.rotation * Vec3::UnitZ(); }
  double height(const Vec3& p) const { return normal().dot(p - point()); }
};

struct LayerTemplate {
  int layer = 0;
  double height = 0.0;
  std::vector<Vec2> outline;     ///< closed: first vertex repeated at the end
  std::vector<Vec2> rod_holes;   ///< hole centers in the ground frame
  std::string label;

  friend bool operator==(const LayerTemplate&, const LayerTemplate&) = default;
};

struct TemplateCatalog {
  std::vector<LayerTemplate> templates;  ///< strictly increasing height
  double tolerance = inches(0.25);
};

struct TubeEntry {
  int id = 0;
  double length = 0.0;
  int frame = 1;               ///< reciprocal frame 1..3
  RigidTransform frame_pose;   ///< location inside its frame (1:1 view)
  RigidTransform tower_pose;   ///< location inside the tower model (1:10 view)
};

struct TubeCatalog {
  std::vector<TubeEntry> entries;
  double tolerance = inches(0.5);
  std::optional<std::size_t> expected_entries;
  std::optional<std::size_t> expected_unique_lengths;

  /// Distinct nominal lengths, ascending.
  std::vector<double> nominal_lengths() const;
};

inline constexpr double kTowerScaleHint = 0.1;

struct CoordinationPayload {
  RigidTransform frame_pose;
  std::optional<RigidTransform> tower_pose;
  double scale_hint = 1.0;
  std::string notation;

  friend bool operator==(const CoordinationPayload&, const CoordinationPayload&) = default;
};

enum class IdentifiedKind : std::uint8_t { layer, tube };

struct IdentificationResult {
  IdentifiedKind kind = IdentifiedKind::layer;
  int entry = 0;  ///< layer index or tube id
  double nominal = 0.0;
  double measured = 0.0;
  double deviation = 0.0;
  CoordinationPayload payload;
  std::vector<Vec3> outline;  ///< positioned template outline (layers only)
  std::vector<Vec3> holes;

  friend bool operator==(const IdentificationResult&, const IdentificationResult&) = default;
};

/// Tube ids already matched in this session.
using TubeAssignments = std::set<int>;

/// Throws below_ground when the point is under the ground plane and no_match
/// when the closest nominal height is outside tolerance.
IdentificationResult identify_layer(const Vec3& point, const GroundPlane& ground,
                                    const TemplateCatalog& catalog);

/// Matches |p2 - p1| against the catalog and assigns the lowest unassigned id
/// of that length.
IdentificationResult identify_tube(const Vec3& p1, const Vec3& p2, const TubeCatalog& catalog,
                                   TubeAssignments& assigned);

std::vector<std::string> validate_catalog(const TemplateCatalog& catalog);
std::vector<std::string> validate_catalog(const TubeCatalog& catalog);

}  // namespace gbmr
