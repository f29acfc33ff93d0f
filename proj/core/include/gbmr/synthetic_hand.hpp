#pragma once

#include <vector>

#include "gbmr/hand_tracking.hpp"
#include "gbmr/protocol.hpp"

namespace gbmr {

/// Well-formed frame with the hand arranged around `cursor`: thumb tip and
/// index tip sit `tip_distance` apart along world X, centered on the cursor.
HandFrame synthetic_frame(TimestampMs t, Handedness hand, const Vec3& cursor, double tip_distance,
                          double confidence = 1.0);

/// Scripted hand that emits frames at a fixed cadence. Pinches are held long
/// enough for the default smoothing window and debounce to register exactly one
/// engage/release pair.
class SyntheticHand {
 public:
  static constexpr double kOpenDistance = 0.060;
  static constexpr double kPinchedDistance = 0.005;

  SyntheticHand(Handedness hand = Handedness::right, TimestampMs start = 1000, TimestampMs period_ms = 33);

  /// Moves the open hand to `where` and lets it settle.
  void move_to(const Vec3& where, int frames = 6);
  /// Closes, holds, and reopens at the current location.
  void pinch(int hold_frames = 8, int release_frames = 8);
  /// Closes at the current location, drags in `steps` to `to`, then releases.
  void drag_to(const Vec3& to, int steps = 10, int release_frames = 8);
  void tap(const Vec3& where) {
    move_to(where);
    pinch();
  }
  void command(Command c);
  void anchor(const RigidTransform& pose);

  TimestampMs now() const { return t_; }
  const std::vector<InputEvent>& events() const { return events_; }
  GestureLog log(std::optional<WorkflowKind> workflow = std::nullopt) const;

 private:
  void emit(double tip_distance, int frames);

  Handedness hand_;
  TimestampMs t_;
  TimestampMs period_;
  Vec3 cursor_ = Vec3::Zero();
  std::vector<InputEvent> events_;
};

}  // namespace gbmr
