#include "gbmr/synthetic_hand.hpp"

namespace gbmr {

HandFrame synthetic_frame(TimestampMs t, Handedness hand, const Vec3& cursor, double tip_distance,
                          double confidence) {
  const double side = hand == Handedness::right ? 1.0 : -1.0;
  JointArray joints;
  // Rough resting hand layout behind the pinch point; only the tips move.
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const double finger = static_cast<double>(i / 5);
    const double along = static_cast<double>(i % 5);
    joints[i].position = cursor + Vec3(side * (0.02 * finger - 0.04), -0.09 + 0.015 * along, -0.02);
    joints[i].orientation = Quat::Identity();
  }
  const Vec3 half(tip_distance / 2, 0.0, 0.0);
  joints[index_of(JointId::thumb_tip)].position = cursor - half;
  joints[index_of(JointId::index_tip)].position = cursor + half;
  return HandFrame(t, hand, joints, confidence);
}

SyntheticHand::SyntheticHand(Handedness hand, TimestampMs start, TimestampMs period_ms)
    : hand_(hand), t_(start), period_(period_ms) {}

void SyntheticHand::emit(double tip_distance, int frames) {
  for (int i = 0; i < frames; ++i) {
    events_.push_back(InputEvent::frame(synthetic_frame(t_, hand_, cursor_, tip_distance)));
    t_ += period_;
  }
}

void SyntheticHand::move_to(const Vec3& where, int frames) {
  cursor_ = where;
  emit(kOpenDistance, frames);
}

void SyntheticHand::pinch(int hold_frames, int release_frames) {
  emit(kPinchedDistance, hold_frames);
  emit(kOpenDistance, release_frames);
}

void SyntheticHand::drag_to(const Vec3& to, int steps, int release_frames) {
  emit(kPinchedDistance, 6);
  const Vec3 from = cursor_;
  for (int i = 1; i <= steps; ++i) {
    cursor_ = from + (to - from) * (static_cast<double>(i) / steps);
    emit(kPinchedDistance, 1);
  }
  // Hold still so the smoothing window settles on the destination.
  emit(kPinchedDistance, 5);
  emit(kOpenDistance, release_frames);
}

void SyntheticHand::command(Command c) {
  events_.push_back({t_, std::move(c)});
  t_ += period_;
}

void SyntheticHand::anchor(const RigidTransform& pose) {
  events_.push_back({t_, AnchorPose{pose}});
  t_ += period_;
}

GestureLog SyntheticHand::log(std::optional<WorkflowKind> workflow) const { return {workflow, events_}; }

}  // namespace gbmr
