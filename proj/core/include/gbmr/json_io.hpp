#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "gbmr/calibration.hpp"
#include "gbmr/geometry.hpp"
#include "gbmr/hand_tracking.hpp"
#include "gbmr/identification.hpp"

namespace gbmr {

using Json = nlohmann::json;

inline constexpr int kToolpathSchema = 1;

// Eigen types live outside our namespace, so they get explicit helpers rather
// than ADL hooks.
Json vec_to_json(const Vec3& v);
Vec3 vec_from_json(const Json& j);
Json vec2_to_json(const Vec2& v);
Vec2 vec2_from_json(const Json& j);
Json quat_to_json(const Quat& q);  ///< [w, x, y, z]
Quat quat_from_json(const Json& j);

void to_json(Json& j, const RigidTransform& t);
void from_json(const Json& j, RigidTransform& t);
void to_json(Json& j, const NotationState& n);
void from_json(const Json& j, NotationState& n);
void to_json(Json& j, const PinchEvent& e);
void from_json(const Json& j, PinchEvent& e);
void to_json(Json& j, const Circle3D& c);
void from_json(const Json& j, Circle3D& c);
void to_json(Json& j, const CylinderModel& c);
void from_json(const Json& j, CylinderModel& c);
void to_json(Json& j, const Rectangle3D& r);
void from_json(const Json& j, Rectangle3D& r);
void to_json(Json& j, const HalvingSurface& s);
void from_json(const Json& j, HalvingSurface& s);
void to_json(Json& j, const HalfLogModel& h);
void from_json(const Json& j, HalfLogModel& h);
void to_json(Json& j, const BoardSpec& b);
void from_json(const Json& j, BoardSpec& b);
void to_json(Json& j, const CutPlacement& c);
void from_json(const Json& j, CutPlacement& c);
void to_json(Json& j, const MountBox& m);
void from_json(const Json& j, MountBox& m);
void to_json(Json& j, const ValidationResult& v);
void from_json(const Json& j, ValidationResult& v);
void to_json(Json& j, const RobotTarget& t);
void from_json(const Json& j, RobotTarget& t);
void to_json(Json& j, const Toolpath& t);
void from_json(const Json& j, Toolpath& t);
void to_json(Json& j, const IdentificationResult& r);
void from_json(const Json& j, IdentificationResult& r);
void to_json(Json& j, const BoardQCRecord& r);
void from_json(const Json& j, BoardQCRecord& r);
void to_json(Json& j, const CalibrationTarget& t);

Json hand_frame_to_json(const HandFrame& f);
HandFrame hand_frame_from_json(const Json& j);

/// Reads a whole file; throws io_error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);

/// Unit-aware catalog loading ("unit": "m" | "in"). Both loaders run
/// validate_catalog and throw invalid_catalog listing the violations.
TemplateCatalog template_catalog_from_json(const Json& j);
TubeCatalog tube_catalog_from_json(const Json& j);

/// Either catalog kind, distinguished by the "kind" field.
struct LoadedCatalog {
  std::optional<TemplateCatalog> layers;
  std::optional<TubeCatalog> tubes;
};
LoadedCatalog catalog_from_json(const Json& j);

/// Violations reported for a catalog document without throwing; parse errors
/// are reported as a single violation.
std::vector<std::string> catalog_violations(const Json& j);

/// Job file: calibration targets, anchor, QC boards, mounts and cut settings.
struct JobFile {
  std::vector<CalibrationTarget> targets;
  std::optional<RigidTransform> anchor;
  std::vector<BoardReference> boards;
  double qc_tolerance = kGreenTolerance;
  std::vector<MountBox> mounts;
  std::optional<BoardSpec> board_spec;
  std::optional<double> clearance;
};
JobFile job_from_json(const Json& j);

Json qc_report_to_json(const std::vector<BoardQCRecord>& records);

}  // namespace gbmr
