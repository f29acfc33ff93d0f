#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gbmr/common.hpp"

namespace gbmr {

/// Articulated hand joints. The thumb has no intermediate joint, giving
/// 1 + 4 + 4 * 5 = 25 joints per hand.
enum class JointId : std::uint8_t {
  wrist,
  thumb_metacarpal,
  thumb_proximal,
  thumb_distal,
  thumb_tip,
  index_metacarpal,
  index_proximal,
  index_intermediate,
  index_distal,
  index_tip,
  middle_metacarpal,
  middle_proximal,
  middle_intermediate,
  middle_distal,
  middle_tip,
  ring_metacarpal,
  ring_proximal,
  ring_intermediate,
  ring_distal,
  ring_tip,
  little_metacarpal,
  little_proximal,
  little_intermediate,
  little_distal,
  little_tip,
};

inline constexpr std::size_t kJointCount = 25;
static_assert(static_cast<std::size_t>(JointId::little_tip) + 1 == kJointCount);

constexpr std::size_t index_of(JointId id) { return static_cast<std::size_t>(id); }

std::string_view to_string(JointId id);

enum class Handedness : std::uint8_t { left, right };

std::string_view to_string(Handedness h);
Handedness parse_handedness(std::string_view s);

struct JointPose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  friend bool operator==(const JointPose& a, const JointPose& b) {
    return a.position == b.position && a.orientation.coeffs() == b.orientation.coeffs();
  }
};

using JointArray = std::array<JointPose, kJointCount>;

/// One timestamped sample of all 25 joints of one hand. Construction validates
/// quaternion norms, finiteness and the confidence range.
class HandFrame {
 public:
  HandFrame(TimestampMs timestamp, Handedness hand, const JointArray& joints,
            double confidence = 1.0);

  TimestampMs timestamp() const { return timestamp_; }
  Handedness handedness() const { return hand_; }
  double confidence() const { return confidence_; }
  const JointArray& joints() const { return joints_; }
  const JointPose& joint(JointId id) const { return joints_[index_of(id)]; }

  friend bool operator==(const HandFrame&, const HandFrame&) = default;

 private:
  TimestampMs timestamp_;
  Handedness hand_;
  JointArray joints_;
  double confidence_;
};

struct PinchDetectorConfig {
  double engage_threshold = 0.015;
  double release_threshold = 0.025;
  double min_confidence = 0.5;
  TimestampMs debounce_ms = 200;
  std::size_t smoothing_window = 5;

  /// Throws invalid_argument when thresholds are not 0 < engage < release,
  /// debounce is negative, or the window is empty.
  void validate() const;
};

enum class PinchKind : std::uint8_t { engaged, moved, released };

std::string_view to_string(PinchKind k);

struct PinchEvent {
  TimestampMs timestamp = 0;
  Handedness hand = Handedness::right;
  PinchKind kind = PinchKind::engaged;
  Vec3 point = Vec3::Zero();

  friend bool operator==(const PinchEvent&, const PinchEvent&) = default;
};

double pinch_distance(const HandFrame& frame);

/// Midpoint of the thumb tip and index tip.
Vec3 pinch_point(const HandFrame& frame);

/// Positional moving average over `history` (oldest first). Orientations,
/// timestamp, and confidence come from the newest frame.
HandFrame smooth(std::span<const HandFrame> history);

enum class PinchPhase : std::uint8_t { idle, pinched };

/// Per-hand state of the pinch automaton. A plain value: copying it forks the
/// detector.
struct DetectorState {
  PinchPhase phase = PinchPhase::idle;
  std::optional<TimestampMs> last_timestamp;
  std::optional<TimestampMs> last_release;
  std::deque<HandFrame> history;

  friend bool operator==(const DetectorState&, const DetectorState&) = default;
};

struct DetectorStep {
  DetectorState state;
  std::vector<PinchEvent> events;
};

/// Advances the hysteresis automaton by one frame. Throws out_of_order when the
/// frame's timestamp does not strictly follow the previous one.
DetectorStep step_detector(const DetectorState& state, const HandFrame& frame,
                           const PinchDetectorConfig& cfg);

/// Convenience wrapper holding one automaton per hand.
class PinchDetector {
 public:
  explicit PinchDetector(PinchDetectorConfig cfg = {});

  std::vector<PinchEvent> update(const HandFrame& frame);

  const DetectorState& state(Handedness h) const { return states_[static_cast<std::size_t>(h)]; }
  const PinchDetectorConfig& config() const { return cfg_; }

 private:
  PinchDetectorConfig cfg_;
  std::array<DetectorState, 2> states_;
};

}  // namespace gbmr
