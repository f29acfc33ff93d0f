#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gbmr/session.hpp"

namespace gbmr {

inline constexpr int kProtocolVersion = 1;
inline constexpr int kGestureLogSchema = 1;

Json input_event_to_json(const InputEvent& e);
InputEvent input_event_from_json(const Json& j);

Json scene_update_to_json(const SceneUpdate& u);
SceneUpdate scene_update_from_json(const Json& j);

/// Compact single-line encoding; doubles use the shortest round-trip form.
std::string encode(const Json& j);

// ---------------------------------------------------------------------------
// Handshake

struct Hello {
  int proto = kProtocolVersion;
  std::optional<WorkflowKind> workflow;
};

Json hello_to_json(const Hello& h);
/// Throws protocol_error unless `j` is {"type": "hello", ...}.
Hello hello_from_json(const Json& j);
Json hello_ack(const std::string& session_id, WorkflowKind workflow);

// ---------------------------------------------------------------------------
// Gesture logs (JSONL: header line, then one InputEvent per line)

struct GestureLog {
  std::optional<WorkflowKind> workflow;
  std::vector<InputEvent> events;

  friend bool operator==(const GestureLog&, const GestureLog&) = default;
};

std::string serialize_log(const GestureLog& log);
/// Throws parse_error naming the offending 1-based line.
GestureLog parse_log(std::string_view text);
GestureLog load_log(const std::filesystem::path& path);

struct ReplayResult {
  Session state;
  std::vector<SceneUpdate> transcript;
};

ReplayResult replay(const GestureLog& log, const SessionConfig& config);

/// One SceneUpdate per line, newline terminated.
std::string serialize_transcript(const std::vector<SceneUpdate>& transcript);

}  // namespace gbmr
