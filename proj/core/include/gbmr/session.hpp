#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gbmr/calibration.hpp"
#include "gbmr/geometry.hpp"
#include "gbmr/hand_tracking.hpp"
#include "gbmr/identification.hpp"
#include "gbmr/json_io.hpp"

namespace gbmr {

enum class WorkflowKind : std::uint8_t {
  log_halving,
  half_log_cutting,
  layer_template,
  tube_index,
  hexnut_jig,
  panel_qc,
};

std::string_view to_string(WorkflowKind k);
WorkflowKind parse_workflow(std::string_view s);

// ---------------------------------------------------------------------------
// Input events

struct AnchorPose {
  RigidTransform pose;
  friend bool operator==(const AnchorPose&, const AnchorPose&) = default;
};

enum class CommandKind : std::uint8_t { reset, undo_point, confirm, select_workflow, set_param };

std::string_view to_string(CommandKind k);
CommandKind parse_command(std::string_view s);

struct Command {
  CommandKind kind = CommandKind::confirm;
  std::string name;  ///< parameter name (set_param) or workflow (select_workflow)
  Json value;        ///< parameter value (set_param)

  friend bool operator==(const Command&, const Command&) = default;
};

struct InputEvent {
  TimestampMs timestamp = 0;
  std::variant<HandFrame, AnchorPose, Command> body;

  static InputEvent frame(const HandFrame& f) { return {f.timestamp(), f}; }

  friend bool operator==(const InputEvent&, const InputEvent&) = default;
};

// ---------------------------------------------------------------------------
// Scene updates

struct GeometryAdded {
  std::string id;
  std::string kind;
  Json payload;
  friend bool operator==(const GeometryAdded&, const GeometryAdded&) = default;
};

struct NotationUpdate {
  std::string subject;
  NotationState notation;
  friend bool operator==(const NotationUpdate&, const NotationUpdate&) = default;
};

struct Instruction {
  std::string text;
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct ToolpathReady {
  std::string reference;
  Toolpath toolpath;
  friend bool operator==(const ToolpathReady&, const ToolpathReady&) = default;
};

struct IdentificationUpdate {
  IdentificationResult result;
  friend bool operator==(const IdentificationUpdate&, const IdentificationUpdate&) = default;
};

struct ErrorUpdate {
  std::string code;
  std::string text;
  friend bool operator==(const ErrorUpdate&, const ErrorUpdate&) = default;
};

using SceneBody =
    std::variant<GeometryAdded, NotationUpdate, Instruction, ToolpathReady, IdentificationUpdate, ErrorUpdate>;

struct SceneUpdate {
  std::uint64_t revision = 0;
  SceneBody body;
  friend bool operator==(const SceneUpdate&, const SceneUpdate&) = default;
};

// ---------------------------------------------------------------------------
// Session

struct SessionConfig {
  WorkflowKind workflow = WorkflowKind::log_halving;
  PinchDetectorConfig pinch;
  Handedness digitizing_hand = Handedness::right;
  ToolpathParams toolpath;
  BoardSpec board_spec;
  double mount_clearance = kDefaultMountClearance;
  std::vector<MountBox> mounts;
  std::shared_ptr<const TemplateCatalog> layers;
  std::shared_ptr<const TubeCatalog> tubes;
  std::vector<CalibrationTarget> targets;
  std::vector<BoardReference> boards;
  double qc_tolerance = kGreenTolerance;
  std::optional<RigidTransform> anchor;
  std::string log_id = "log";
};

/// Applies a job file on top of `cfg` (targets, boards, mounts, anchor, cut
/// settings).
void apply_job(SessionConfig& cfg, const JobFile& job);

/// Workflow state; a pure fold of input events from a fixed configuration.
/// Copying a Session forks it.
class Session {
 public:
  explicit Session(SessionConfig cfg);

  std::vector<SceneUpdate> step(const InputEvent& event);

  /// Error update with the next revision, for transport-level failures that
  /// never reach the fold (malformed messages).
  SceneUpdate protocol_error(std::string_view code, const std::string& text);

  std::uint64_t revision() const { return revision_; }
  const SessionConfig& config() const { return cfg_; }

  /// Workflow-level state as JSON: digitized points, fitted models,
  /// identifications, calibration progress, QC records and the toolpath.
  /// Excludes the revision counter and detector internals.
  Json snapshot() const;

  const std::optional<Toolpath>& toolpath() const { return work_.toolpath; }
  const std::vector<Vec3>& points() const { return work_.points; }
  const std::optional<CylinderModel>& cylinder() const { return work_.cylinder; }
  const std::optional<HalvingSurface>& halving() const { return work_.surface; }
  const std::optional<HalfLogModel>& half_log() const { return work_.half_log; }
  const CalibrationSession& calibration() const { return work_.calibration; }
  const std::vector<IdentificationResult>& identifications() const { return work_.identifications; }
  const std::vector<BoardQCRecord>& qc_records() const { return work_.qc; }

 private:
  struct Action {
    std::variant<Vec3, AnchorPose, Command> body;
  };

  // Everything re-derivable from the action list.
  struct WorkState {
    std::vector<Vec3> points;
    std::array<std::optional<Circle3D>, 2> circles;
    std::optional<CylinderModel> cylinder;
    std::optional<HalvingSurface> surface;
    std::optional<HalfLogModel> half_log;
    std::optional<CutPlacement> placement;
    std::optional<ValidationResult> validation;
    std::optional<Toolpath> toolpath;
    RigidTransform anchor;
    BoardSpec board_spec;
    double clearance = kDefaultMountClearance;
    ToolpathParams toolpath_params;
    std::vector<IdentificationResult> identifications;
    TubeAssignments assigned;
    CalibrationSession calibration;
    std::vector<BoardReference> boards;
    std::vector<BoardQCRecord> qc;
  };

  class Emitter;

  WorkState initial_state() const;
  void rederive();
  bool apply_point(const Vec3& p, Emitter& out);
  void apply_anchor_pose(const AnchorPose& a, Emitter& out);
  void apply_command(const Command& c, TimestampMs t, Emitter& out);
  void apply_set_param(const Command& c, Emitter& out);
  void handle_pinch(const PinchEvent& e, Emitter& out);
  bool workflow_complete() const;

  bool point_log_halving(const Vec3& p, Emitter& out);
  bool point_half_log(const Vec3& p, Emitter& out);
  bool point_layer(const Vec3& p, Emitter& out);
  bool point_tube(const Vec3& p, Emitter& out);
  bool point_panel(const Vec3& p, Emitter& out);

  SessionConfig cfg_;
  std::array<DetectorState, 2> detectors_;
  std::optional<TimestampMs> last_timestamp_;
  std::uint64_t revision_ = 0;
  std::vector<Action> actions_;
  WorkState work_;
};

using SessionState = Session;

/// Pure-fold form of Session::step.
std::pair<Session, std::vector<SceneUpdate>> step_session(Session state, const InputEvent& event);

}  // namespace gbmr
