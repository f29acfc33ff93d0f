#include "gbmr/session.hpp"

#include <algorithm>

namespace gbmr {

std::string_view to_string(WorkflowKind k) {
  switch (k) {
    case WorkflowKind::log_halving: return "log_halving";
    case WorkflowKind::half_log_cutting: return "half_log_cutting";
    case WorkflowKind::layer_template: return "layer_template";
    case WorkflowKind::tube_index: return "tube_index";
    case WorkflowKind::hexnut_jig: return "hexnut_jig";
    case WorkflowKind::panel_qc: return "panel_qc";
  }
  return "unknown";
}

WorkflowKind parse_workflow(std::string_view s) {
  for (auto k : {WorkflowKind::log_halving, WorkflowKind::half_log_cutting, WorkflowKind::layer_template,
                 WorkflowKind::tube_index, WorkflowKind::hexnut_jig, WorkflowKind::panel_qc}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::invalid_argument, "unknown workflow '" + std::string(s) + "'");
}

std::string_view to_string(CommandKind k) {
  switch (k) {
    case CommandKind::reset: return "reset";
    case CommandKind::undo_point: return "undo_point";
    case CommandKind::confirm: return "confirm";
    case CommandKind::select_workflow: return "select_workflow";
    case CommandKind::set_param: return "set_param";
  }
  return "unknown";
}

CommandKind parse_command(std::string_view s) {
  for (auto k : {CommandKind::reset, CommandKind::undo_point, CommandKind::confirm, CommandKind::select_workflow,
                 CommandKind::set_param}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::parse_error, "unknown command '" + std::string(s) + "'");
}

void apply_job(SessionConfig& cfg, const JobFile& job) {
  if (!job.targets.empty()) cfg.targets = job.targets;
  if (!job.boards.empty()) cfg.boards = job.boards;
  cfg.qc_tolerance = job.qc_tolerance;
  if (!job.mounts.empty()) cfg.mounts = job.mounts;
  if (job.anchor) cfg.anchor = job.anchor;
  if (job.board_spec) cfg.board_spec = *job.board_spec;
  if (job.clearance) cfg.mount_clearance = *job.clearance;
}

class Session::Emitter {
 public:
  Emitter(std::uint64_t& revision, bool silent) : revision_(revision), silent_(silent) {}

  void emit(SceneBody body) {
    if (silent_) return;
    updates.push_back({++revision_, std::move(body)});
  }
  void error(const Error& e) { emit(ErrorUpdate{std::string(to_string(e.code())), e.what()}); }
  void error(ErrorCode code, const std::string& text) { emit(ErrorUpdate{std::string(to_string(code)), text}); }
  void instruct(std::string text) { emit(Instruction{std::move(text)}); }
  void notation(std::string subject, NotationState n) { emit(NotationUpdate{std::move(subject), std::move(n)}); }
  void geometry(std::string id, std::string kind, Json payload) {
    emit(GeometryAdded{std::move(id), std::move(kind), std::move(payload)});
  }

  std::vector<SceneUpdate> updates;

 private:
  std::uint64_t& revision_;
  bool silent_;
};

namespace {

Json point_payload(const Vec3& p) { return Json{{"position", vec_to_json(p)}}; }

Json rings_payload(const CylinderModel& c) {
  Json rings = Json::array();
  for (int which = 0; which < 2; ++which) {
    Json ring = Json::array();
    for (const Vec3& p : c.ring(which)) ring.push_back(vec_to_json(p));
    rings.push_back(ring);
  }
  return rings;
}

}  // namespace

Session::Session(SessionConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.pinch.validate();
  cfg_.board_spec.validate();
  if (cfg_.anchor) cfg_.anchor->validate();
  work_ = initial_state();
}

Session::WorkState Session::initial_state() const {
  WorkState w;
  w.anchor = cfg_.anchor.value_or(RigidTransform::identity());
  w.board_spec = cfg_.board_spec;
  w.clearance = cfg_.mount_clearance;
  w.toolpath_params = cfg_.toolpath;
  w.calibration = CalibrationSession(cfg_.targets, w.anchor);
  w.boards = cfg_.boards;
  return w;
}

std::vector<SceneUpdate> Session::step(const InputEvent& event) {
  Emitter out(revision_, false);
  if (last_timestamp_ && event.timestamp < *last_timestamp_) {
    out.error(ErrorCode::out_of_order, "event at t=" + std::to_string(event.timestamp) +
                                           " precedes t=" + std::to_string(*last_timestamp_));
    return std::move(out.updates);
  }
  last_timestamp_ = event.timestamp;

  if (const auto* frame = std::get_if<HandFrame>(&event.body)) {
    auto& slot = detectors_[static_cast<std::size_t>(frame->handedness())];
    DetectorStep s;
    try {
      s = step_detector(slot, *frame, cfg_.pinch);
    } catch (const Error& e) {
      out.error(e);
      return std::move(out.updates);
    }
    slot = std::move(s.state);
    for (const PinchEvent& e : s.events) handle_pinch(e, out);
  } else if (const auto* anchor = std::get_if<AnchorPose>(&event.body)) {
    apply_anchor_pose(*anchor, out);
  } else {
    apply_command(std::get<Command>(event.body), event.timestamp, out);
  }
  return std::move(out.updates);
}

SceneUpdate Session::protocol_error(std::string_view code, const std::string& text) {
  return {++revision_, ErrorUpdate{std::string(code), text}};
}

void Session::handle_pinch(const PinchEvent& e, Emitter& out) {
  if (e.hand != cfg_.digitizing_hand) return;

  if (cfg_.workflow == WorkflowKind::hexnut_jig) {
    CalibrationSession& cal = work_.calibration;
    if (cal.targets().empty()) {
      if (e.kind == PinchKind::engaged) out.error(ErrorCode::workflow_phase, "no calibration targets loaded");
      return;
    }
    const TrackOutcome t = cal.track(e);
    if (!t.accepted) {
      if (e.kind == PinchKind::engaged) out.instruct(t.notice);
      return;
    }
    out.notation("locator/" + t.subject, *t.notation);
    if (t.completed) {
      const TrackOutcome adv = cal.advance();
      out.instruct(adv.notice);
    }
    return;
  }

  if (e.kind != PinchKind::engaged) return;
  if (workflow_complete()) {
    out.error(ErrorCode::workflow_phase, "workflow complete; send reset to start over");
    return;
  }
  if (apply_point(e.point, out)) actions_.push_back({e.point});
}

bool Session::workflow_complete() const {
  switch (cfg_.workflow) {
    case WorkflowKind::log_halving:
    case WorkflowKind::half_log_cutting:
      return work_.toolpath.has_value();
    default:
      return false;
  }
}

bool Session::apply_point(const Vec3& p, Emitter& out) {
  switch (cfg_.workflow) {
    case WorkflowKind::log_halving: return point_log_halving(p, out);
    case WorkflowKind::half_log_cutting: return point_half_log(p, out);
    case WorkflowKind::layer_template: return point_layer(p, out);
    case WorkflowKind::tube_index: return point_tube(p, out);
    case WorkflowKind::panel_qc: return point_panel(p, out);
    case WorkflowKind::hexnut_jig: return false;
  }
  return false;
}

bool Session::point_log_halving(const Vec3& p, Emitter& out) {
  const std::size_t n = work_.points.size() + 1;
  std::optional<Circle3D> circle;
  std::optional<CylinderModel> cyl;
  std::optional<HalvingSurface> surface;
  try {
    if (n == 3 || n == 6) circle = circumcircle(work_.points[n - 3], work_.points[n - 2], p);
    if (n == 6) {
      cyl = fit_cylinder(*work_.circles[0], *circle);
      surface = halving_surface(*cyl, work_.toolpath_params);
    }
  } catch (const Error& e) {
    out.error(e);
    out.instruct("re-place rim point " + std::to_string(n) + " of 6");
    return false;
  }

  work_.points.push_back(p);
  out.geometry("point/" + std::to_string(n), "point", point_payload(p));
  if (n == 3 || n == 6) {
    const std::size_t which = n == 3 ? 0 : 1;
    work_.circles[which] = circle;
    out.geometry("circle/" + std::to_string(which), "circle", *circle);
  }
  if (n < 6) {
    out.instruct("place rim point " + std::to_string(n + 1) + " of 6 (end " + (n < 3 ? "1" : "2") + ")");
    return true;
  }
  work_.cylinder = cyl;
  work_.surface = surface;
  Toolpath tp = halving_toolpath(*surface, work_.toolpath_params);
  tp.log_id = cfg_.log_id;
  work_.toolpath = tp;
  out.geometry("cylinder/0", "cylinder", Json{{"model", *cyl}, {"rings", rings_payload(*cyl)}});
  out.geometry("surface/0", "halving_surface", *surface);
  out.emit(ToolpathReady{"toolpath/halving", tp});
  out.instruct("halving toolpath ready");
  return true;
}

bool Session::point_half_log(const Vec3& p, Emitter& out) {
  if (!work_.half_log) {
    const std::size_t n = work_.points.size() + 1;
    if (n == 3) {
      try {
        work_.half_log = define_half_log(work_.points[0], work_.points[1], p);
      } catch (const Error& e) {
        out.error(e);
        out.instruct("re-place the length point");
        return false;
      }
    }
    work_.points.push_back(p);
    out.geometry("point/" + std::to_string(n), "point", point_payload(p));
    if (n == 1) {
      out.instruct("place the second diameter point");
    } else if (n == 2) {
      out.instruct("place a point at the opposite end of the half log");
    } else {
      out.geometry("half_log/0", "half_log", *work_.half_log);
      out.instruct("place a point on the log profile to set the cut");
    }
    return true;
  }

  CutPlacement placement;
  try {
    placement = place_cut(*work_.half_log, p, work_.board_spec);
  } catch (const Error& e) {
    out.error(e);
    out.notation("cut", NotationState::red(e.what()));
    return false;
  }
  ValidationResult v = validate_cut(placement, *work_.half_log, cfg_.mounts, work_.clearance);
  work_.points.push_back(p);
  work_.placement = placement;
  work_.validation = v;
  out.geometry("cut/0", "cut_placement", Json{{"placement", placement}, {"validation", v}});
  out.notation("cut", v.notation);
  out.instruct(v.pass ? "cut placement valid; confirm to generate the toolpath"
                      : "adjust the cut location");
  return true;
}

bool Session::point_layer(const Vec3& p, Emitter& out) {
  if (!cfg_.layers) {
    out.error(ErrorCode::invalid_catalog, "no layer template catalog loaded");
    return false;
  }
  IdentificationResult r;
  try {
    r = identify_layer(p, GroundPlane{work_.anchor}, *cfg_.layers);
  } catch (const Error& e) {
    out.error(e);
    out.notation("layer", NotationState::red(e.what()));
    return false;
  }
  work_.points.push_back(p);
  work_.identifications.push_back(r);
  Json outline = Json::array();
  for (const Vec3& v : r.outline) outline.push_back(vec_to_json(v));
  Json holes = Json::array();
  for (const Vec3& v : r.holes) holes.push_back(vec_to_json(v));
  out.emit(IdentificationUpdate{r});
  out.geometry("template/" + std::to_string(r.entry), "template",
               Json{{"layer", r.entry}, {"outline", outline}, {"holes", holes}});
  out.notation("layer", NotationState::green(r.payload.notation));
  return true;
}

bool Session::point_tube(const Vec3& p, Emitter& out) {
  if (!cfg_.tubes) {
    out.error(ErrorCode::invalid_catalog, "no tube catalog loaded");
    return false;
  }
  const std::size_t n = work_.points.size() + 1;
  if (n % 2 == 1) {
    work_.points.push_back(p);
    out.geometry("point/" + std::to_string(n), "point", point_payload(p));
    out.instruct("place a point at the other end of the tube");
    return true;
  }
  IdentificationResult r;
  try {
    r = identify_tube(work_.points.back(), p, *cfg_.tubes, work_.assigned);
  } catch (const Error& e) {
    out.error(e);
    out.notation("tube", NotationState::red(e.what()));
    out.instruct("re-place the second end of the tube");
    return false;
  }
  work_.points.push_back(p);
  work_.identifications.push_back(r);
  out.geometry("point/" + std::to_string(n), "point", point_payload(p));
  out.emit(IdentificationUpdate{r});
  out.notation("tube/" + std::to_string(r.entry), NotationState::green(r.payload.notation));
  out.instruct("measure the next tube");
  return true;
}

bool Session::point_panel(const Vec3& p, Emitter& out) {
  if (work_.boards.empty()) {
    out.error(ErrorCode::workflow_phase, "no digital boards loaded");
    return false;
  }
  std::vector<BoardReference> world = work_.boards;
  for (BoardReference& b : world) b.center = work_.anchor.apply(b.center);
  const BoardQCRecord r = qc_board(p, world, cfg_.qc_tolerance);
  work_.points.push_back(p);
  work_.qc.push_back(r);
  out.geometry("point/" + std::to_string(work_.points.size()), "point", point_payload(p));
  out.notation("board/" + std::to_string(r.board_id), r.notation);
  return true;
}

void Session::apply_anchor_pose(const AnchorPose& a, Emitter& out) {
  try {
    a.pose.validate();
  } catch (const Error& e) {
    out.error(e);
    return;
  }
  work_.anchor = a.pose;
  if (cfg_.workflow == WorkflowKind::hexnut_jig) work_.calibration.set_anchor(a.pose);
  actions_.push_back({a});
  out.geometry("anchor", "anchor", a.pose);
}

void Session::apply_set_param(const Command& c, Emitter& out) {
  try {
    if (!c.value.is_number()) throw Error(ErrorCode::invalid_argument, "parameter value must be a number");
    const double v = c.value.get<double>();
    BoardSpec spec = work_.board_spec;
    if (c.name == "board_count") {
      if (!c.value.is_number_integer()) throw Error(ErrorCode::invalid_argument, "board_count must be an integer");
      spec.board_count = c.value.get<int>();
    } else if (c.name == "min_width") {
      spec.min_width = v;
    } else if (c.name == "min_thickness") {
      spec.min_thickness = v;
    } else if (c.name == "clearance" || c.name == "overcut_margin" || c.name == "retract_clearance") {
      if (!(v >= 0.0)) throw Error(ErrorCode::invalid_argument, c.name + " must be >= 0");
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown parameter '" + c.name + "'");
    }
    spec.validate();
    work_.board_spec = spec;
    if (c.name == "clearance") work_.clearance = v;
    if (c.name == "overcut_margin") work_.toolpath_params.overcut_margin = v;
    if (c.name == "retract_clearance") work_.toolpath_params.retract_clearance = v;
  } catch (const Error& e) {
    out.error(e);
    return;
  }
  actions_.push_back({c});
  out.instruct("set " + c.name + " = " + c.value.dump());
}

void Session::apply_command(const Command& c, TimestampMs, Emitter& out) {
  switch (c.kind) {
    case CommandKind::reset:
      actions_.clear();
      work_ = initial_state();
      out.instruct("workflow reset");
      return;

    case CommandKind::undo_point: {
      if (cfg_.workflow == WorkflowKind::hexnut_jig) {
        out.error(ErrorCode::nothing_to_undo, "locator tracking has no digitized points to undo");
        return;
      }
      auto it = std::find_if(actions_.rbegin(), actions_.rend(),
                             [](const Action& a) { return std::holds_alternative<Vec3>(a.body); });
      if (it == actions_.rend()) {
        out.error(ErrorCode::nothing_to_undo, "no digitized point to undo");
        return;
      }
      actions_.erase(std::next(it).base());
      rederive();
      out.instruct("removed the last point; " + std::to_string(work_.points.size()) + " point(s) remain");
      return;
    }

    case CommandKind::confirm: {
      if (cfg_.workflow == WorkflowKind::hexnut_jig) {
        const TrackOutcome adv = work_.calibration.advance();
        out.instruct(adv.notice);
        return;
      }
      if (cfg_.workflow != WorkflowKind::half_log_cutting) {
        out.error(ErrorCode::workflow_phase, "nothing to confirm in this workflow");
        return;
      }
      if (work_.toolpath) {
        out.error(ErrorCode::workflow_phase, "toolpath already generated");
        return;
      }
      if (!work_.placement || !work_.validation) {
        out.error(ErrorCode::workflow_phase, "no cut placement to confirm");
        return;
      }
      try {
        Toolpath tp = cut_toolpath(*work_.placement, *work_.validation, work_.toolpath_params);
        tp.log_id = cfg_.log_id;
        work_.toolpath = tp;
        actions_.push_back({c});
        out.emit(ToolpathReady{"toolpath/cut", tp});
        out.instruct("cutting toolpath ready");
      } catch (const Error& e) {
        out.error(e);
      }
      return;
    }

    case CommandKind::select_workflow:
      if (c.name == to_string(cfg_.workflow)) {
        out.instruct("workflow " + c.name + " active");
      } else {
        out.error(ErrorCode::workflow_phase, "switching workflows requires a new session");
      }
      return;

    case CommandKind::set_param:
      apply_set_param(c, out);
      return;
  }
}

void Session::rederive() {
  const std::vector<Action> actions = std::move(actions_);
  actions_.clear();
  const CalibrationSession calibration = work_.calibration;
  work_ = initial_state();
  work_.calibration = calibration;
  std::uint64_t scratch = 0;
  Emitter silent(scratch, true);
  for (const Action& a : actions) {
    if (const auto* p = std::get_if<Vec3>(&a.body)) {
      if (apply_point(*p, silent)) actions_.push_back(a);
    } else if (const auto* anchor = std::get_if<AnchorPose>(&a.body)) {
      apply_anchor_pose(*anchor, silent);
    } else {
      apply_command(std::get<Command>(a.body), 0, silent);
    }
  }
}

Json Session::snapshot() const {
  const WorkState& w = work_;
  Json points = Json::array();
  for (const Vec3& p : w.points) points.push_back(vec_to_json(p));
  Json circles = Json::array();
  for (const auto& c : w.circles) circles.push_back(c ? Json(*c) : Json());
  Json ids = Json::array();
  for (const IdentificationResult& r : w.identifications) ids.push_back(r);
  Json cal_states = Json::array();
  for (std::size_t i = 0; i < w.calibration.states().size(); ++i) {
    const TargetState& s = w.calibration.states()[i];
    cal_states.push_back({{"id", w.calibration.targets()[i].id},
                          {"live_position", s.live_position ? vec_to_json(*s.live_position) : Json()},
                          {"live_distance", s.live_distance ? Json(*s.live_distance) : Json()},
                          {"notation", s.notation},
                          {"completed", s.completed}});
  }
  return Json{
      {"schema", 1},
      {"workflow", to_string(cfg_.workflow)},
      {"points", points},
      {"anchor", w.anchor},
      {"circles", circles},
      {"cylinder", w.cylinder ? Json(*w.cylinder) : Json()},
      {"halving_surface", w.surface ? Json(*w.surface) : Json()},
      {"half_log", w.half_log ? Json(*w.half_log) : Json()},
      {"cut_placement", w.placement ? Json(*w.placement) : Json()},
      {"validation", w.validation ? Json(*w.validation) : Json()},
      {"board_spec", w.board_spec},
      {"toolpath", w.toolpath ? Json(*w.toolpath) : Json()},
      {"identifications", ids},
      {"assigned_tubes", Json(std::vector<int>(w.assigned.begin(), w.assigned.end()))},
      {"calibration",
       {{"current", w.calibration.current_index()}, {"done", w.calibration.done()}, {"targets", cal_states}}},
      {"qc", qc_report_to_json(w.qc)},
  };
}

std::pair<Session, std::vector<SceneUpdate>> step_session(Session state, const InputEvent& event) {
  std::vector<SceneUpdate> updates = state.step(event);
  return {std::move(state), std::move(updates)};
}

}  // namespace gbmr
