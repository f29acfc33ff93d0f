#include "gbmr/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <sstream>

namespace gbmr {

namespace {

std::string mm(double meters) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << meters * 1000.0 << " mm";
  return os.str();
}

}  // namespace

void CalibrationTarget::validate() const {
  if (!(green_tolerance > 0.0 && green_tolerance < yellow_tolerance)) {
    throw Error(ErrorCode::invalid_argument, "target " + id + ": need 0 < green tolerance < yellow tolerance");
  }
  if (!all_finite(goal)) throw Error(ErrorCode::invalid_argument, "target " + id + ": goal is not finite");
  if (rail && std::abs(rail->direction.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_argument, "target " + id + ": rail direction must be unit length");
  }
}

NotationState notation_for_distance(double distance, double green_tolerance, double yellow_tolerance) {
  if (within_tolerance(distance, green_tolerance)) return NotationState::green("in position");
  if (within_tolerance(distance, yellow_tolerance)) return NotationState::yellow(mm(distance) + " from goal");
  return NotationState::red(mm(distance) + " from goal");
}

CalibrationSession::CalibrationSession(std::vector<CalibrationTarget> model_targets,
                                       const RigidTransform& anchor)
    : model_targets_(std::move(model_targets)), states_(model_targets_.size()) {
  for (const CalibrationTarget& t : model_targets_) t.validate();
  set_anchor(anchor);
}

void CalibrationSession::set_anchor(const RigidTransform& anchor) {
  anchor.validate();
  anchor_ = anchor;
  targets_ = model_targets_;
  for (CalibrationTarget& t : targets_) {
    t.goal = anchor.apply(t.goal);
    if (t.rail) t.rail = Line{anchor.apply(t.rail->point), anchor.apply_direction(t.rail->direction)};
  }
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    TargetState& s = states_[i];
    if (s.completed || !s.live_position) continue;
    s.live_distance = (*s.live_position - targets_[i].goal).norm();
    s.notation = notation_for_distance(*s.live_distance, targets_[i].green_tolerance,
                                       targets_[i].yellow_tolerance);
  }
}

TrackOutcome CalibrationSession::track(const PinchEvent& event, const std::optional<std::string>& target_id) {
  TrackOutcome out;
  if (done()) {
    out.notice = "all locators are placed";
    return out;
  }
  const CalibrationTarget& target = targets_[current_];
  TargetState& state = states_[current_];
  out.subject = target.id;
  if (target_id && *target_id != target.id) {
    out.subject = *target_id;
    out.notice = "locator " + *target_id + " is out of sequence; place " + target.id + " first";
    return out;
  }
  if (state.completed) {
    out.notice = "locator " + target.id + " is already placed";
    return out;
  }

  const Vec3 live = target.rail ? target.rail->project(event.point) : event.point;
  state.live_position = live;
  state.live_distance = (live - target.goal).norm();
  state.notation = notation_for_distance(*state.live_distance, target.green_tolerance, target.yellow_tolerance);
  out.accepted = true;
  if (event.kind == PinchKind::released && state.notation.color == NotationColor::green) {
    state.completed = true;
    state.notation.message = "placed";
    out.completed = true;
  }
  out.notation = state.notation;
  return out;
}

TrackOutcome CalibrationSession::advance() {
  TrackOutcome out;
  if (done()) {
    out.notice = "all locators are placed";
    return out;
  }
  const CalibrationTarget& target = targets_[current_];
  out.subject = target.id;
  if (!states_[current_].completed) {
    out.notice = "locator " + target.id + " is not in position yet";
    out.notation = states_[current_].notation;
    return out;
  }
  ++current_;
  out.accepted = true;
  out.notice = done() ? "all locators are placed" : "move to locator " + targets_[current_].id;
  return out;
}

BoardQCRecord qc_board(const Vec3& point, std::span<const BoardReference> boards, double tolerance) {
  if (boards.empty()) throw Error(ErrorCode::invalid_argument, "no digital boards to check against");
  double nearest = std::numeric_limits<double>::infinity();
  for (const BoardReference& b : boards) nearest = std::min(nearest, (point - b.center).norm());
  const BoardReference* best = nullptr;
  for (const BoardReference& b : boards) {
    if ((point - b.center).norm() <= nearest + 1e-9 && (!best || b.id < best->id)) best = &b;
  }
  BoardQCRecord r;
  r.point = point;
  r.board_id = best->id;
  r.reference = best->center;
  r.deviation = (point - best->center).norm();
  r.pass = within_tolerance(r.deviation, tolerance);
  r.notation = r.pass ? NotationState::green("board " + std::to_string(best->id) + " within tolerance")
                      : NotationState::red("board " + std::to_string(best->id) + " off by " + mm(r.deviation));
  return r;
}

std::vector<Vec3> apply_anchor(const RigidTransform& anchor, std::span<const Vec3> model_points) {
  anchor.validate();
  std::vector<Vec3> out;
  out.reserve(model_points.size());
  for (const Vec3& p : model_points) out.push_back(anchor.apply(p));
  return out;
}

}  // namespace gbmr
