#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbmr/common.hpp"
#include "gbmr/hand_tracking.hpp"
#include "gbmr/notation.hpp"

namespace gbmr {

inline constexpr double kGreenTolerance = inches(0.125);
inline constexpr double kYellowTolerance = inches(0.5);

struct CalibrationTarget {
  std::string id;
  Vec3 goal = Vec3::Zero();
  std::optional<Line> rail;  ///< 1-D travel constraint, unit direction
  double green_tolerance = kGreenTolerance;
  double yellow_tolerance = kYellowTolerance;

  void validate() const;

  friend bool operator==(const CalibrationTarget&, const CalibrationTarget&) = default;
};

/// Maps a goal distance onto the red / yellow / green scale. Both boundaries
/// are inclusive on the better side.
NotationState notation_for_distance(double distance, double green_tolerance, double yellow_tolerance);

struct TargetState {
  std::optional<Vec3> live_position;
  std::optional<double> live_distance;
  NotationState notation = NotationState::red("not yet tracked");
  bool completed = false;

  friend bool operator==(const TargetState&, const TargetState&) = default;
};

struct TrackOutcome {
  bool accepted = false;
  bool completed = false;          ///< this event completed the target
  std::string subject;             ///< target id the outcome refers to
  std::optional<NotationState> notation;
  std::string notice;              ///< set when the event was ignored
};

/// Sequenced locator placement. Targets are kept in the model frame and
/// expressed in the world through the current anchor; re-anchoring replaces
/// the previous anchor.
///
/// The current index is the first incomplete target, except right after a
/// completion, where it still points at the completed target until advance().
class CalibrationSession {
 public:
  CalibrationSession() = default;
  explicit CalibrationSession(std::vector<CalibrationTarget> model_targets,
                              const RigidTransform& anchor = RigidTransform::identity());

  void set_anchor(const RigidTransform& anchor);
  const RigidTransform& anchor() const { return anchor_; }

  /// Engaged and moved events update the live position of the addressed
  /// target (the current one when `target_id` is empty); released completes
  /// it if the release point is green. Events for any other target are
  /// ignored with a notice.
  TrackOutcome track(const PinchEvent& event, const std::optional<std::string>& target_id = std::nullopt);

  /// Moves to the next target iff the current one is complete.
  TrackOutcome advance();

  std::size_t current_index() const { return current_; }
  bool done() const { return current_ >= targets_.size(); }
  const std::vector<CalibrationTarget>& targets() const { return targets_; }
  const std::vector<CalibrationTarget>& model_targets() const { return model_targets_; }
  const std::vector<TargetState>& states() const { return states_; }

  friend bool operator==(const CalibrationSession&, const CalibrationSession&) = default;

 private:
  std::vector<CalibrationTarget> model_targets_;
  std::vector<CalibrationTarget> targets_;
  std::vector<TargetState> states_;
  RigidTransform anchor_;
  std::size_t current_ = 0;
};

struct BoardReference {
  int id = 0;
  Vec3 center = Vec3::Zero();  ///< finger-joint center

  friend bool operator==(const BoardReference&, const BoardReference&) = default;
};

struct BoardQCRecord {
  Vec3 point = Vec3::Zero();
  int board_id = 0;
  Vec3 reference = Vec3::Zero();
  double deviation = 0.0;
  bool pass = false;
  NotationState notation;

  friend bool operator==(const BoardQCRecord&, const BoardQCRecord&) = default;
};

/// Nearest board by finger-joint center. Distances tied within 1e-9 m go to
/// the lowest id.
BoardQCRecord qc_board(const Vec3& point, std::span<const BoardReference> boards,
                       double tolerance = kGreenTolerance);

/// Expresses model-frame points in the world. Throws non_rigid_transform for
/// an invalid anchor.
std::vector<Vec3> apply_anchor(const RigidTransform& anchor, std::span<const Vec3> model_points);

}  // namespace gbmr
