#include "gbmr/protocol.hpp"

#include <sstream>

namespace gbmr {

namespace {

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json input_event_to_json(const InputEvent& e) {
  return std::visit(
      [&](const auto& body) -> Json {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, HandFrame>) {
          Json j = hand_frame_to_json(body);
          j["type"] = "hand_frame";
          return j;
        } else if constexpr (std::is_same_v<T, AnchorPose>) {
          return Json{{"type", "anchor_pose"}, {"t", e.timestamp}, {"pose", body.pose}};
        } else {
          Json j{{"type", "command"}, {"t", e.timestamp}, {"command", to_string(body.kind)}};
          if (!body.name.empty()) j["name"] = body.name;
          if (!body.value.is_null()) j["value"] = body.value;
          return j;
        }
      },
      e.body);
}

InputEvent input_event_from_json(const Json& j) {
  return guarded("input event", [&] {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "input event must be a JSON object");
    const std::string type = j.at("type").get<std::string>();
    if (type == "hand_frame") return InputEvent::frame(hand_frame_from_json(j));
    const TimestampMs t = j.at("t").get<TimestampMs>();
    if (type == "anchor_pose") return InputEvent{t, AnchorPose{j.at("pose").get<RigidTransform>()}};
    if (type == "command") {
      Command c;
      c.kind = parse_command(j.at("command").get<std::string>());
      c.name = j.value("name", std::string());
      if (j.contains("value")) c.value = j.at("value");
      return InputEvent{t, c};
    }
    throw Error(ErrorCode::parse_error, "unknown input event type '" + type + "'");
  });
}

Json scene_update_to_json(const SceneUpdate& u) {
  Json j = std::visit(
      [](const auto& body) -> Json {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, GeometryAdded>) {
          return {{"type", "geometry_added"}, {"id", body.id}, {"kind", body.kind}, {"payload", body.payload}};
        } else if constexpr (std::is_same_v<T, NotationUpdate>) {
          return {{"type", "notation"}, {"subject", body.subject}, {"notation", body.notation}};
        } else if constexpr (std::is_same_v<T, Instruction>) {
          return {{"type", "instruction"}, {"text", body.text}};
        } else if constexpr (std::is_same_v<T, ToolpathReady>) {
          return {{"type", "toolpath_ready"}, {"reference", body.reference}, {"toolpath", body.toolpath}};
        } else if constexpr (std::is_same_v<T, IdentificationUpdate>) {
          return {{"type", "identification"}, {"result", body.result}};
        } else {
          return {{"type", "error"}, {"code", body.code}, {"text", body.text}};
        }
      },
      u.body);
  j["rev"] = u.revision;
  return j;
}

SceneUpdate scene_update_from_json(const Json& j) {
  return guarded("scene update", [&] {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "scene update must be a JSON object");
    SceneUpdate u;
    u.revision = j.at("rev").get<std::uint64_t>();
    const std::string type = j.at("type").get<std::string>();
    if (type == "geometry_added") {
      u.body = GeometryAdded{j.at("id").get<std::string>(), j.at("kind").get<std::string>(), j.at("payload")};
    } else if (type == "notation") {
      u.body = NotationUpdate{j.at("subject").get<std::string>(), j.at("notation").get<NotationState>()};
    } else if (type == "instruction") {
      u.body = Instruction{j.at("text").get<std::string>()};
    } else if (type == "toolpath_ready") {
      u.body = ToolpathReady{j.at("reference").get<std::string>(), j.at("toolpath").get<Toolpath>()};
    } else if (type == "identification") {
      u.body = IdentificationUpdate{j.at("result").get<IdentificationResult>()};
    } else if (type == "error") {
      u.body = ErrorUpdate{j.at("code").get<std::string>(), j.at("text").get<std::string>()};
    } else {
      throw Error(ErrorCode::parse_error, "unknown scene update type '" + type + "'");
    }
    return u;
  });
}

std::string encode(const Json& j) { return j.dump(); }

Json hello_to_json(const Hello& h) {
  Json j{{"type", "hello"}, {"proto", h.proto}};
  if (h.workflow) j["workflow"] = to_string(*h.workflow);
  return j;
}

Hello hello_from_json(const Json& j) {
  if (!j.is_object() || j.value("type", std::string()) != "hello") {
    throw Error(ErrorCode::protocol_error, "expected a hello message");
  }
  Hello h;
  if (!j.contains("proto") || !j.at("proto").is_number_integer()) {
    throw Error(ErrorCode::protocol_error, "hello is missing an integer proto field");
  }
  h.proto = j.at("proto").get<int>();
  if (j.contains("workflow")) {
    if (!j.at("workflow").is_string()) throw Error(ErrorCode::protocol_error, "workflow must be a string");
    h.workflow = parse_workflow(j.at("workflow").get<std::string>());
  }
  return h;
}

Json hello_ack(const std::string& session_id, WorkflowKind workflow) {
  return {{"type", "hello_ack"}, {"proto", kProtocolVersion}, {"session", session_id},
          {"workflow", to_string(workflow)}};
}

std::string serialize_log(const GestureLog& log) {
  Json header{{"schema", kGestureLogSchema}, {"units", "m"}};
  if (log.workflow) header["workflow"] = to_string(*log.workflow);
  std::string out = encode(header) + "\n";
  for (const InputEvent& e : log.events) out += encode(input_event_to_json(e)) + "\n";
  return out;
}

GestureLog parse_log(std::string_view text) {
  GestureLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (!have_header) {
        if (!j.is_object() || j.value("schema", -1) != kGestureLogSchema) {
          throw Error(ErrorCode::parse_error, "header must declare schema 1");
        }
        if (j.value("units", std::string()) != "m") throw Error(ErrorCode::parse_error, "header units must be \"m\"");
        if (j.contains("workflow")) log.workflow = parse_workflow(j.at("workflow").get<std::string>());
        have_header = true;
        continue;
      }
      log.events.push_back(input_event_from_json(j));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

GestureLog load_log(const std::filesystem::path& path) { return parse_log(read_file(path)); }

ReplayResult replay(const GestureLog& log, const SessionConfig& config) {
  ReplayResult r{Session(config), {}};
  for (const InputEvent& e : log.events) {
    std::vector<SceneUpdate> u = r.state.step(e);
    r.transcript.insert(r.transcript.end(), std::make_move_iterator(u.begin()), std::make_move_iterator(u.end()));
  }
  return r;
}

std::string serialize_transcript(const std::vector<SceneUpdate>& transcript) {
  std::string out;
  for (const SceneUpdate& u : transcript) out += encode(scene_update_to_json(u)) + "\n";
  return out;
}

}  // namespace gbmr
