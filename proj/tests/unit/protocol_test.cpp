#include <gtest/gtest.h>

#include "gbmr/protocol.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace gbmr {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::io_error;
}

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(Protocol, InputEventRoundTrip) {
  gen::Rng rng(71);
  for (int i = 0; i < 10000; ++i) {
    const InputEvent e = gen::input_event(rng);
    const std::string text = encode(input_event_to_json(e));
    const InputEvent back = input_event_from_json(Json::parse(text));
    ASSERT_EQ(back, e) << text;
    ASSERT_EQ(encode(input_event_to_json(back)), text);
  }
}

TEST(Protocol, SceneUpdateRoundTrip) {
  gen::Rng rng(73);
  for (int i = 0; i < 10000; ++i) {
    const SceneUpdate u = gen::scene_update(rng);
    const std::string text = encode(scene_update_to_json(u));
    const SceneUpdate back = scene_update_from_json(Json::parse(text));
    ASSERT_EQ(encode(scene_update_to_json(back)), text);
    ASSERT_EQ(back.revision, u.revision);
    ASSERT_EQ(back.body.index(), u.body.index());
  }
}

TEST(Protocol, EncodingIsSingleLine) {
  gen::Rng rng(79);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(encode(scene_update_to_json(gen::scene_update(rng))).find('\n'), std::string::npos);
  }
}

TEST(Protocol, WireShapes) {
  const SceneUpdate u{7, Instruction{"place rim point 2 of 6 (end 1)"}};
  EXPECT_EQ(encode(scene_update_to_json(u)), R"js({"rev":7,"text":"place rim point 2 of 6 (end 1)","type":"instruction"})js");
  const InputEvent c{12, Command{CommandKind::undo_point, {}, {}}};
  EXPECT_EQ(encode(input_event_to_json(c)), R"({"command":"undo_point","t":12,"type":"command"})");
}

TEST(Protocol, MalformedInputEvents) {
  EXPECT_EQ(code_of([] { input_event_from_json(Json::parse("[1,2]")); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { input_event_from_json(Json::parse(R"({"type":"wave","t":1})")); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { input_event_from_json(Json::parse(R"({"type":"command","t":1,"command":"explode"})")); }),
            ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { input_event_from_json(Json::parse(R"({"type":"hand_frame","t":1,"hand":"right"})")); }),
            ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { scene_update_from_json(Json::parse(R"({"type":"instruction"})")); }), ErrorCode::parse_error);
}

TEST(Handshake, HelloAndAck) {
  const Hello h = hello_from_json(hello_to_json({kProtocolVersion, WorkflowKind::panel_qc}));
  EXPECT_EQ(h.proto, kProtocolVersion);
  EXPECT_EQ(h.workflow, WorkflowKind::panel_qc);
  EXPECT_FALSE(hello_from_json(Json{{"type", "hello"}, {"proto", 1}}).workflow);
  EXPECT_EQ(code_of([] { hello_from_json(Json{{"type", "command"}}); }), ErrorCode::protocol_error);
  EXPECT_EQ(code_of([] { hello_from_json(Json{{"type", "hello"}, {"proto", "1"}}); }), ErrorCode::protocol_error);
  const Json ack = hello_ack("s1", WorkflowKind::log_halving);
  EXPECT_EQ(ack.at("type"), "hello_ack");
  EXPECT_EQ(ack.at("proto"), kProtocolVersion);
  EXPECT_EQ(ack.at("workflow"), "log_halving");
}

TEST(GestureLogFormat, SerializeParseIdentity) {
  gen::Rng rng(83);
  for (int i = 0; i < 200; ++i) {
    GestureLog log;
    if (gen::coin(rng)) log.workflow = fixtures::kAllWorkflows[gen::uniform_int(rng, 0, 5)];
    for (int k = gen::uniform_int(rng, 0, 20); k > 0; --k) log.events.push_back(gen::input_event(rng));
    const std::string text = serialize_log(log);
    EXPECT_EQ(parse_log(text), log);
    EXPECT_EQ(serialize_log(parse_log(text)), text);
  }
}

TEST(GestureLogFormat, BlankLinesAndCrlfAreTolerated) {
  const std::string text =
      "{\"schema\":1,\"units\":\"m\"}\r\n\n   \n{\"type\":\"command\",\"t\":1,\"command\":\"reset\"}\r\n\n";
  const GestureLog log = parse_log(text);
  ASSERT_EQ(log.events.size(), 1u);
  EXPECT_FALSE(log.workflow);
  EXPECT_TRUE(parse_log("").events.empty());
  EXPECT_TRUE(parse_log("{\"schema\":1,\"units\":\"m\"}\n").events.empty());
}

TEST(GestureLogFormat, ErrorsNameTheLine) {
  const std::string bad_event = "{\"schema\":1,\"units\":\"m\"}\n\n{\"type\":\"command\",\"t\":1,\"command\":\"reset\"}\n{oops\n";
  EXPECT_EQ(code_of([&] { parse_log(bad_event); }), ErrorCode::parse_error);
  EXPECT_EQ(error_text([&] { parse_log(bad_event); }).rfind("line 4:", 0), 0u);
  EXPECT_EQ(error_text([] { parse_log("{\"schema\":2,\"units\":\"m\"}\n"); }).rfind("line 1:", 0), 0u);
  EXPECT_EQ(error_text([] { parse_log("{\"schema\":1,\"units\":\"mm\"}\n"); }).rfind("line 1:", 0), 0u);
  EXPECT_EQ(code_of([] { load_log(fixtures::kDir / "logs" / "missing.jsonl"); }), ErrorCode::io_error);
}

TEST(Replay, FixtureLogsAreDeterministic) {
  for (WorkflowKind k : fixtures::kAllWorkflows) {
    const GestureLog log = load_log(fixtures::log_path(k));
    EXPECT_EQ(log.workflow, k);
    const ReplayResult a = replay(log, fixtures::config(k));
    const ReplayResult b = replay(log, fixtures::config(k));
    EXPECT_EQ(serialize_transcript(a.transcript), serialize_transcript(b.transcript)) << to_string(k);
    EXPECT_EQ(a.state.snapshot().dump(), b.state.snapshot().dump());
    // Parsing the transcript back reproduces it byte for byte.
    std::string again;
    for (const SceneUpdate& u : a.transcript) {
      again += encode(scene_update_to_json(scene_update_from_json(Json::parse(encode(scene_update_to_json(u)))))) + "\n";
    }
    EXPECT_EQ(again, serialize_transcript(a.transcript));
  }
}

TEST(Replay, SerializedLogReplaysIdentically) {
  const GestureLog log = gen::log_halving_session();
  const ReplayResult direct = replay(log, SessionConfig{});
  const ReplayResult via_text = replay(parse_log(serialize_log(log)), SessionConfig{});
  EXPECT_EQ(serialize_transcript(direct.transcript), serialize_transcript(via_text.transcript));
}

}  // namespace
}  // namespace gbmr
