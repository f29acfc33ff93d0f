#include "gbmr/hand_tracking.hpp"

#include <cmath>
#include <string>

namespace gbmr {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "wrist",
    "thumb_metacarpal",   "thumb_proximal",   "thumb_distal",  "thumb_tip",
    "index_metacarpal",   "index_proximal",   "index_intermediate",
    "index_distal",       "index_tip",
    "middle_metacarpal",  "middle_proximal",  "middle_intermediate",
    "middle_distal",      "middle_tip",
    "ring_metacarpal",    "ring_proximal",    "ring_intermediate",
    "ring_distal",        "ring_tip",
    "little_metacarpal",  "little_proximal",  "little_intermediate",
    "little_distal",      "little_tip",
};

}  // namespace

std::string_view to_string(JointId id) { return kJointNames[index_of(id)]; }

std::string_view to_string(Handedness h) { return h == Handedness::left ? "left" : "right"; }

Handedness parse_handedness(std::string_view s) {
  if (s == "left") return Handedness::left;
  if (s == "right") return Handedness::right;
  throw Error(ErrorCode::parse_error, "unknown handedness '" + std::string(s) + "'");
}

std::string_view to_string(PinchKind k) {
  switch (k) {
    case PinchKind::engaged: return "engaged";
    case PinchKind::moved: return "moved";
    case PinchKind::released: return "released";
  }
  return "unknown";
}

HandFrame::HandFrame(TimestampMs timestamp, Handedness hand, const JointArray& joints,
                     double confidence)
    : timestamp_(timestamp), hand_(hand), joints_(joints), confidence_(confidence) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw Error(ErrorCode::invalid_frame, "confidence outside [0, 1]");
  }
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const JointPose& j = joints_[i];
    if (!all_finite(j.position)) {
      throw Error(ErrorCode::invalid_frame,
                  "non-finite position for joint " + std::string(kJointNames[i]));
    }
    if (!j.orientation.coeffs().allFinite() || std::abs(j.orientation.norm() - 1.0) > 1e-6) {
      throw Error(ErrorCode::invalid_frame,
                  "orientation of joint " + std::string(kJointNames[i]) + " is not a unit quaternion");
    }
  }
}

void PinchDetectorConfig::validate() const {
  if (!(engage_threshold > 0.0 && engage_threshold < release_threshold)) {
    throw Error(ErrorCode::invalid_argument, "pinch thresholds must satisfy 0 < engage < release");
  }
  if (debounce_ms < 0) throw Error(ErrorCode::invalid_argument, "debounce must be >= 0");
  if (smoothing_window < 1) throw Error(ErrorCode::invalid_argument, "smoothing window must be >= 1");
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "min_confidence outside [0, 1]");
  }
}

double pinch_distance(const HandFrame& frame) {
  return (frame.joint(JointId::index_tip).position - frame.joint(JointId::thumb_tip).position).norm();
}

Vec3 pinch_point(const HandFrame& frame) {
  return 0.5 * (frame.joint(JointId::thumb_tip).position + frame.joint(JointId::index_tip).position);
}

HandFrame smooth(std::span<const HandFrame> history) {
  if (history.empty()) throw Error(ErrorCode::invalid_argument, "cannot smooth an empty history");
  const HandFrame& newest = history.back();
  if (history.size() == 1) return newest;

  JointArray joints = newest.joints();
  for (std::size_t j = 0; j < kJointCount; ++j) {
    Vec3 sum = Vec3::Zero();
    for (const HandFrame& f : history) {
      if (f.handedness() != newest.handedness()) {
        throw Error(ErrorCode::invalid_argument, "smoothing window mixes hands");
      }
      sum += f.joints()[j].position;
    }
    joints[j].position = sum / static_cast<double>(history.size());
  }
  return HandFrame(newest.timestamp(), newest.handedness(), joints, newest.confidence());
}

DetectorStep step_detector(const DetectorState& state, const HandFrame& frame,
                           const PinchDetectorConfig& cfg) {
  if (state.last_timestamp && frame.timestamp() <= *state.last_timestamp) {
    throw Error(ErrorCode::out_of_order,
                "frame at t=" + std::to_string(frame.timestamp()) +
                    " does not follow t=" + std::to_string(*state.last_timestamp));
  }

  DetectorStep out{state, {}};
  DetectorState& next = out.state;
  next.last_timestamp = frame.timestamp();

  // Low-confidence frames neither enter the smoothing window nor drive
  // transitions; the automaton holds its phase.
  if (frame.confidence() < cfg.min_confidence) return out;

  next.history.push_back(frame);
  while (next.history.size() > cfg.smoothing_window) next.history.pop_front();

  const std::vector<HandFrame> window(next.history.begin(), next.history.end());
  const HandFrame smoothed = smooth(window);
  const double distance = pinch_distance(smoothed);
  const PinchEvent base{frame.timestamp(), frame.handedness(), PinchKind::engaged,
                        pinch_point(smoothed)};

  if (next.phase == PinchPhase::idle) {
    const bool debounced =
        !next.last_release || frame.timestamp() - *next.last_release >= cfg.debounce_ms;
    if (distance < cfg.engage_threshold && debounced) {
      next.phase = PinchPhase::pinched;
      out.events.push_back(base);
    }
  } else if (distance > cfg.release_threshold) {
    next.phase = PinchPhase::idle;
    next.last_release = frame.timestamp();
    PinchEvent e = base;
    e.kind = PinchKind::released;
    out.events.push_back(e);
  } else {
    PinchEvent e = base;
    e.kind = PinchKind::moved;
    out.events.push_back(e);
  }
  return out;
}

PinchDetector::PinchDetector(PinchDetectorConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::vector<PinchEvent> PinchDetector::update(const HandFrame& frame) {
  auto& slot = states_[static_cast<std::size_t>(frame.handedness())];
  DetectorStep step = step_detector(slot, frame, cfg_);
  slot = std::move(step.state);
  return std::move(step.events);
}

}  // namespace gbmr
