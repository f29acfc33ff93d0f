#include "gbmr/json_io.hpp"

#include <fstream>
#include <sstream>

namespace gbmr {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::parse_error, what);
}

double unit_scale(const Json& j) {
  const std::string unit = j.value("unit", std::string("m"));
  if (unit == "m") return 1.0;
  if (unit == "in") return kMetersPerInch;
  throw Error(ErrorCode::parse_error, "unknown unit '" + unit + "' (expected \"m\" or \"in\")");
}

RigidTransform scaled_pose(const Json& j, double scale) {
  RigidTransform t = j.get<RigidTransform>();
  t.translation *= scale;
  return t;
}

template <typename T>
T wrap_parse(const char* what, auto&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json vec_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const Json& j) {
  require(j.is_array() && j.size() == 3, "expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json vec2_to_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Vec2 vec2_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2, "expected a 2-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json quat_to_json(const Quat& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }

Quat quat_from_json(const Json& j) {
  require(j.is_array() && j.size() == 4, "expected a quaternion [w, x, y, z]");
  return Quat(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

void to_json(Json& j, const RigidTransform& t) {
  j = Json{{"translation", vec_to_json(t.translation)}, {"rotation", quat_to_json(t.rotation)}};
}

void from_json(const Json& j, RigidTransform& t) {
  t.translation = vec_from_json(j.at("translation"));
  t.rotation = quat_from_json(j.at("rotation"));
}

void to_json(Json& j, const NotationState& n) {
  j = Json{{"color", to_string(n.color)}, {"glyph", to_string(n.glyph)}, {"message", n.message}};
}

void from_json(const Json& j, NotationState& n) {
  n.color = parse_notation_color(j.at("color").get<std::string>());
  n.glyph = parse_notation_glyph(j.at("glyph").get<std::string>());
  n.message = j.at("message").get<std::string>();
}

void to_json(Json& j, const PinchEvent& e) {
  j = Json{{"t", e.timestamp}, {"hand", to_string(e.hand)}, {"kind", to_string(e.kind)},
           {"point", vec_to_json(e.point)}};
}

void from_json(const Json& j, PinchEvent& e) {
  e.timestamp = j.at("t").get<TimestampMs>();
  e.hand = parse_handedness(j.at("hand").get<std::string>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "engaged") {
    e.kind = PinchKind::engaged;
  } else if (kind == "moved") {
    e.kind = PinchKind::moved;
  } else if (kind == "released") {
    e.kind = PinchKind::released;
  } else {
    throw Error(ErrorCode::parse_error, "unknown pinch kind '" + kind + "'");
  }
  e.point = vec_from_json(j.at("point"));
}

void to_json(Json& j, const Circle3D& c) {
  j = Json{{"center", vec_to_json(c.center)}, {"normal", vec_to_json(c.normal)}, {"radius", c.radius}};
}

void from_json(const Json& j, Circle3D& c) {
  c.center = vec_from_json(j.at("center"));
  c.normal = vec_from_json(j.at("normal"));
  c.radius = j.at("radius").get<double>();
}

void to_json(Json& j, const CylinderModel& c) {
  j = Json{{"start", c.start}, {"end", c.end}, {"axis", vec_to_json(c.axis)},
           {"length", c.length}, {"tessellation", c.tessellation}};
}

void from_json(const Json& j, CylinderModel& c) {
  c.start = j.at("start").get<Circle3D>();
  c.end = j.at("end").get<Circle3D>();
  c.axis = vec_from_json(j.at("axis"));
  c.length = j.at("length").get<double>();
  c.tessellation = j.at("tessellation").get<int>();
}

void to_json(Json& j, const Rectangle3D& r) {
  j = Json{{"center", vec_to_json(r.center)}, {"u", vec_to_json(r.u)}, {"v", vec_to_json(r.v)},
           {"length", r.length}, {"width", r.width}};
}

void from_json(const Json& j, Rectangle3D& r) {
  r.center = vec_from_json(j.at("center"));
  r.u = vec_from_json(j.at("u"));
  r.v = vec_from_json(j.at("v"));
  r.length = j.at("length").get<double>();
  r.width = j.at("width").get<double>();
}

void to_json(Json& j, const HalvingSurface& s) {
  j = Json{{"rect", s.rect}, {"normal", vec_to_json(s.normal())}, {"log_length", s.log_length},
           {"max_radius", s.max_radius}};
}

void from_json(const Json& j, HalvingSurface& s) {
  s.rect = j.at("rect").get<Rectangle3D>();
  s.log_length = j.at("log_length").get<double>();
  s.max_radius = j.at("max_radius").get<double>();
}

void to_json(Json& j, const HalfLogModel& h) {
  j = Json{{"base_point", vec_to_json(h.base_point)}, {"base_normal", vec_to_json(h.base_normal)},
           {"axis", vec_to_json(h.axis)}, {"radius", h.radius}, {"length", h.length}};
}

void from_json(const Json& j, HalfLogModel& h) {
  h.base_point = vec_from_json(j.at("base_point"));
  h.base_normal = vec_from_json(j.at("base_normal"));
  h.axis = vec_from_json(j.at("axis"));
  h.radius = j.at("radius").get<double>();
  h.length = j.at("length").get<double>();
}

void to_json(Json& j, const BoardSpec& b) {
  j = Json{{"min_width", b.min_width}, {"min_thickness", b.min_thickness}, {"board_count", b.board_count}};
}

void from_json(const Json& j, BoardSpec& b) {
  b.min_width = j.value("min_width", BoardSpec{}.min_width);
  b.min_thickness = j.value("min_thickness", BoardSpec{}.min_thickness);
  b.board_count = j.value("board_count", BoardSpec{}.board_count);
}

void to_json(Json& j, const CutPlacement& c) {
  Json boards = Json::array();
  for (const BoardCut& b : c.boards) boards.push_back({{"depth", b.depth}, {"surface", b.surface}});
  j = Json{{"anchor", vec_to_json(c.anchor)}, {"plane_normal", vec_to_json(c.plane_normal)},
           {"boards", boards}, {"spec", c.spec}};
}

void from_json(const Json& j, CutPlacement& c) {
  c.anchor = vec_from_json(j.at("anchor"));
  c.plane_normal = vec_from_json(j.at("plane_normal"));
  c.spec = j.at("spec").get<BoardSpec>();
  c.boards.clear();
  for (const Json& b : j.at("boards")) {
    c.boards.push_back({b.at("depth").get<double>(), b.at("surface").get<Rectangle3D>()});
  }
}

void to_json(Json& j, const MountBox& m) {
  j = Json{{"pose", m.pose}, {"cross_section", m.cross_section}, {"depth", m.depth}};
}

void from_json(const Json& j, MountBox& m) {
  m.pose = j.at("pose").get<RigidTransform>();
  m.cross_section = j.value("cross_section", MountBox{}.cross_section);
  m.depth = j.value("depth", MountBox{}.depth);
}

void to_json(Json& j, const ValidationResult& v) {
  Json boards = Json::array();
  for (const BoardCheck& b : v.boards) {
    boards.push_back({{"inside_boundary", b.inside_boundary},
                      {"clear_of_mounts", b.clear_of_mounts},
                      {"width_ok", b.width_ok}});
  }
  j = Json{{"status", v.pass ? "pass" : "fail"}, {"reasons", boards}, {"notation", v.notation}};
}

void from_json(const Json& j, ValidationResult& v) {
  v.pass = j.at("status").get<std::string>() == "pass";
  v.boards.clear();
  for (const Json& b : j.at("reasons")) {
    v.boards.push_back({b.at("inside_boundary").get<bool>(), b.at("clear_of_mounts").get<bool>(),
                        b.at("width_ok").get<bool>()});
  }
  v.notation = j.at("notation").get<NotationState>();
}

void to_json(Json& j, const RobotTarget& t) {
  j = Json{{"pos", vec_to_json(t.position)}, {"quat", quat_to_json(t.orientation)}, {"kind", to_string(t.kind)}};
}

void from_json(const Json& j, RobotTarget& t) {
  t.position = vec_from_json(j.at("pos"));
  t.orientation = quat_from_json(j.at("quat"));
  t.kind = parse_motion_kind(j.at("kind").get<std::string>());
}

void to_json(Json& j, const Toolpath& t) {
  j = Json{{"schema", kToolpathSchema},
           {"targets", t.targets},
           {"metadata", {{"workflow", t.workflow}, {"log_id", t.log_id}}}};
}

void from_json(const Json& j, Toolpath& t) {
  const int schema = j.at("schema").get<int>();
  require(schema == kToolpathSchema, "unsupported toolpath schema " + std::to_string(schema));
  t.targets = j.at("targets").get<std::vector<RobotTarget>>();
  t.workflow = j.at("metadata").at("workflow").get<std::string>();
  t.log_id = j.at("metadata").at("log_id").get<std::string>();
}

void to_json(Json& j, const IdentificationResult& r) {
  Json payload{{"frame_pose", r.payload.frame_pose},
               {"scale_hint", r.payload.scale_hint},
               {"notation", r.payload.notation}};
  if (r.payload.tower_pose) payload["tower_pose"] = *r.payload.tower_pose;
  Json outline = Json::array();
  for (const Vec3& p : r.outline) outline.push_back(vec_to_json(p));
  Json holes = Json::array();
  for (const Vec3& p : r.holes) holes.push_back(vec_to_json(p));
  j = Json{{"kind", r.kind == IdentifiedKind::layer ? "layer" : "tube"},
           {"entry", r.entry},
           {"nominal", r.nominal},
           {"measured", r.measured},
           {"deviation", r.deviation},
           {"payload", payload},
           {"outline", outline},
           {"holes", holes}};
}

void from_json(const Json& j, IdentificationResult& r) {
  const std::string kind = j.at("kind").get<std::string>();
  require(kind == "layer" || kind == "tube", "unknown identification kind '" + kind + "'");
  r.kind = kind == "layer" ? IdentifiedKind::layer : IdentifiedKind::tube;
  r.entry = j.at("entry").get<int>();
  r.nominal = j.at("nominal").get<double>();
  r.measured = j.at("measured").get<double>();
  r.deviation = j.at("deviation").get<double>();
  const Json& p = j.at("payload");
  r.payload.frame_pose = p.at("frame_pose").get<RigidTransform>();
  r.payload.tower_pose.reset();
  if (p.contains("tower_pose")) r.payload.tower_pose = p.at("tower_pose").get<RigidTransform>();
  r.payload.scale_hint = p.at("scale_hint").get<double>();
  r.payload.notation = p.at("notation").get<std::string>();
  r.outline.clear();
  for (const Json& v : j.at("outline")) r.outline.push_back(vec_from_json(v));
  r.holes.clear();
  for (const Json& v : j.at("holes")) r.holes.push_back(vec_from_json(v));
}

void to_json(Json& j, const BoardQCRecord& r) {
  j = Json{{"point", vec_to_json(r.point)}, {"board_id", r.board_id}, {"reference", vec_to_json(r.reference)},
           {"deviation", r.deviation}, {"verdict", r.pass ? "pass" : "fail"}, {"notation", r.notation}};
}

void from_json(const Json& j, BoardQCRecord& r) {
  r.point = vec_from_json(j.at("point"));
  r.board_id = j.at("board_id").get<int>();
  r.reference = vec_from_json(j.at("reference"));
  r.deviation = j.at("deviation").get<double>();
  r.pass = j.at("verdict").get<std::string>() == "pass";
  r.notation = j.at("notation").get<NotationState>();
}

void to_json(Json& j, const CalibrationTarget& t) {
  j = Json{{"id", t.id},
           {"goal", vec_to_json(t.goal)},
           {"tolerances", {{"green", t.green_tolerance}, {"yellow", t.yellow_tolerance}}}};
  if (t.rail) j["rail"] = {{"point", vec_to_json(t.rail->point)}, {"direction", vec_to_json(t.rail->direction)}};
}

Json hand_frame_to_json(const HandFrame& f) {
  Json joints = Json::array();
  for (const JointPose& p : f.joints()) {
    joints.push_back({p.position.x(), p.position.y(), p.position.z(), p.orientation.w(), p.orientation.x(),
                      p.orientation.y(), p.orientation.z()});
  }
  return Json{{"t", f.timestamp()}, {"hand", to_string(f.handedness())}, {"confidence", f.confidence()},
              {"joints", joints}};
}

HandFrame hand_frame_from_json(const Json& j) {
  const Json& joints = j.at("joints");
  require(joints.is_array() && joints.size() == kJointCount, "hand frame needs exactly 25 joints");
  JointArray arr;
  for (std::size_t i = 0; i < kJointCount; ++i) {
    const Json& a = joints[i];
    require(a.is_array() && a.size() == 7, "joint entries are [px, py, pz, qw, qx, qy, qz]");
    arr[i].position = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
    arr[i].orientation = Quat(a[3].get<double>(), a[4].get<double>(), a[5].get<double>(), a[6].get<double>());
  }
  return HandFrame(j.at("t").get<TimestampMs>(), parse_handedness(j.at("hand").get<std::string>()), arr,
                   j.value("confidence", 1.0));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
  }
}

namespace {

TemplateCatalog parse_template_catalog(const Json& j) {
  return wrap_parse<TemplateCatalog>("layer catalog", [&] {
    const double s = unit_scale(j);
    TemplateCatalog c;
    c.tolerance = j.contains("tolerance") ? j.at("tolerance").get<double>() * s : TemplateCatalog{}.tolerance;
    for (const Json& e : j.at("entries")) {
      LayerTemplate t;
      t.layer = e.at("layer").get<int>();
      t.height = e.at("height").get<double>() * s;
      for (const Json& v : e.value("outline", Json::array())) t.outline.push_back(vec2_from_json(v) * s);
      for (const Json& v : e.value("rod_holes", Json::array())) t.rod_holes.push_back(vec2_from_json(v) * s);
      t.label = e.value("label", std::string());
      c.templates.push_back(std::move(t));
    }
    return c;
  });
}

TubeCatalog parse_tube_catalog(const Json& j) {
  return wrap_parse<TubeCatalog>("tube catalog", [&] {
    const double s = unit_scale(j);
    TubeCatalog c;
    c.tolerance = j.contains("tolerance") ? j.at("tolerance").get<double>() * s : TubeCatalog{}.tolerance;
    if (j.contains("expected_entries")) c.expected_entries = j.at("expected_entries").get<std::size_t>();
    if (j.contains("expected_unique_lengths")) {
      c.expected_unique_lengths = j.at("expected_unique_lengths").get<std::size_t>();
    }
    for (const Json& e : j.at("entries")) {
      TubeEntry t;
      t.id = e.at("id").get<int>();
      t.length = e.at("length").get<double>() * s;
      t.frame = e.at("frame").get<int>();
      if (e.contains("frame_pose")) t.frame_pose = scaled_pose(e.at("frame_pose"), s);
      if (e.contains("tower_pose")) t.tower_pose = scaled_pose(e.at("tower_pose"), s);
      c.entries.push_back(t);
    }
    return c;
  });
}

[[noreturn]] void throw_violations(const std::vector<std::string>& v) {
  std::string msg = "catalog failed validation:";
  for (const std::string& s : v) msg += " " + s + ";";
  msg.pop_back();
  throw Error(ErrorCode::invalid_catalog, msg);
}

std::string catalog_kind(const Json& j) {
  require(j.is_object(), "catalog must be a JSON object");
  const std::string kind = j.value("kind", std::string());
  require(kind == "layers" || kind == "tubes", "catalog kind must be \"layers\" or \"tubes\"");
  return kind;
}

}  // namespace

TemplateCatalog template_catalog_from_json(const Json& j) {
  TemplateCatalog c = parse_template_catalog(j);
  if (auto v = validate_catalog(c); !v.empty()) throw_violations(v);
  return c;
}

TubeCatalog tube_catalog_from_json(const Json& j) {
  TubeCatalog c = parse_tube_catalog(j);
  if (auto v = validate_catalog(c); !v.empty()) throw_violations(v);
  return c;
}

LoadedCatalog catalog_from_json(const Json& j) {
  LoadedCatalog out;
  if (catalog_kind(j) == "layers") {
    out.layers = template_catalog_from_json(j);
  } else {
    out.tubes = tube_catalog_from_json(j);
  }
  return out;
}

std::vector<std::string> catalog_violations(const Json& j) {
  try {
    if (catalog_kind(j) == "layers") return validate_catalog(parse_template_catalog(j));
    return validate_catalog(parse_tube_catalog(j));
  } catch (const Error& e) {
    return {e.what()};
  }
}

JobFile job_from_json(const Json& j) {
  return wrap_parse<JobFile>("job file", [&] {
    require(j.is_object(), "job file must be a JSON object");
    const double s = unit_scale(j);
    JobFile job;
    for (const Json& e : j.value("targets", Json::array())) {
      CalibrationTarget t;
      t.id = e.at("id").is_string() ? e.at("id").get<std::string>() : e.at("id").dump();
      t.goal = vec_from_json(e.at("goal")) * s;
      if (e.contains("rail")) {
        const Json& r = e.at("rail");
        t.rail = Line{vec_from_json(r.at("point")) * s, vec_from_json(r.at("direction")).normalized()};
      }
      if (e.contains("tolerances")) {
        const Json& tol = e.at("tolerances");
        t.green_tolerance = tol.contains("green") ? tol.at("green").get<double>() * s : kGreenTolerance;
        t.yellow_tolerance = tol.contains("yellow") ? tol.at("yellow").get<double>() * s : kYellowTolerance;
      }
      t.validate();
      job.targets.push_back(std::move(t));
    }
    if (j.contains("anchor")) {
      job.anchor = scaled_pose(j.at("anchor"), s);
      job.anchor->validate();
    }
    for (const Json& e : j.value("boards", Json::array())) {
      job.boards.push_back({e.at("id").get<int>(), vec_from_json(e.at("center")) * s});
    }
    if (j.contains("qc_tolerance")) job.qc_tolerance = j.at("qc_tolerance").get<double>() * s;
    for (const Json& e : j.value("mounts", Json::array())) {
      MountBox m;
      m.pose = scaled_pose(e.at("pose"), s);
      m.cross_section = e.contains("cross_section") ? e.at("cross_section").get<double>() * s : m.cross_section;
      m.depth = e.contains("depth") ? e.at("depth").get<double>() * s : m.depth;
      job.mounts.push_back(m);
    }
    if (j.contains("board_spec")) {
      const Json& b = j.at("board_spec");
      BoardSpec spec;
      if (b.contains("min_width")) spec.min_width = b.at("min_width").get<double>() * s;
      if (b.contains("min_thickness")) spec.min_thickness = b.at("min_thickness").get<double>() * s;
      spec.board_count = b.value("board_count", spec.board_count);
      spec.validate();
      job.board_spec = spec;
    }
    if (j.contains("clearance")) job.clearance = j.at("clearance").get<double>() * s;
    return job;
  });
}

Json qc_report_to_json(const std::vector<BoardQCRecord>& records) {
  Json out = Json::array();
  for (const BoardQCRecord& r : records) out.push_back(r);
  return out;
}

}  // namespace gbmr
