// gbmr: serve sessions, replay gesture logs, check catalogs, export toolpaths.
//
// Failures print one JSON line on stderr: {"error": <code>, "message": <text>}.
// Exit status 2 covers usage errors and missing files, 1 everything else.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gbmr/json_io.hpp"
#include "gbmr/protocol.hpp"
#include "gbmr/server.hpp"
#include "gbmr/session.hpp"
#include "gbmr/synthetic_hand.hpp"

namespace fs = std::filesystem;

namespace {

struct CliFailure {
  int status;
  std::string code;
  std::string message;
};

[[noreturn]] void fail(int status, std::string code, std::string message) {
  throw CliFailure{status, std::move(code), std::move(message)};
}

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) fail(2, "file_not_found", "file not found: " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(1, "io_error", "cannot write " + path);
  out << text;
  if (!out) fail(1, "io_error", "cannot write " + path);
}

gbmr::SessionConfig make_config(gbmr::WorkflowKind workflow, const std::string& catalog, const std::string& job) {
  gbmr::SessionConfig cfg;
  cfg.workflow = workflow;
  if (!catalog.empty()) {
    require_file(catalog);
    gbmr::LoadedCatalog c = gbmr::catalog_from_json(gbmr::read_json_file(catalog));
    if (c.layers) cfg.layers = std::make_shared<const gbmr::TemplateCatalog>(std::move(*c.layers));
    if (c.tubes) cfg.tubes = std::make_shared<const gbmr::TubeCatalog>(std::move(*c.tubes));
  }
  if (!job.empty()) {
    require_file(job);
    gbmr::apply_job(cfg, gbmr::job_from_json(gbmr::read_json_file(job)));
  }
  return cfg;
}

int run_serve(const std::string& address, unsigned short port, const std::string& workflow,
              const std::string& catalog, const std::string& job, int threads) {
  gbmr::ServerConfig sc;
  sc.address = address;
  sc.port = port;
  sc.threads = threads;
  sc.session = make_config(gbmr::parse_workflow(workflow), catalog, job);
  if (const char* dir = std::getenv("GBMR_LOG_DIR"); dir && *dir) sc.log_dir = fs::path(dir);

  // Block the shutdown signals before the server spawns threads so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  gbmr::Server server(sc);
  server.start();
  std::cout << gbmr::Json{{"listening", server.port()}, {"address", address}, {"workflow", workflow}}.dump()
            << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  return 0;
}

int run_replay(const std::string& file, const std::string& workflow, const std::string& out,
               const std::string& catalog, const std::string& job, const std::string& state_out) {
  require_file(file);
  const gbmr::GestureLog log = gbmr::load_log(file);
  std::optional<gbmr::WorkflowKind> kind = log.workflow;
  if (!workflow.empty()) kind = gbmr::parse_workflow(workflow);
  if (!kind) fail(2, "usage", "no workflow given and the log header names none; pass --workflow");
  if (log.workflow && *log.workflow != *kind) {
    fail(1, "workflow_phase", "log was recorded for workflow " + std::string(gbmr::to_string(*log.workflow)));
  }

  const gbmr::ReplayResult r = gbmr::replay(log, make_config(*kind, catalog, job));
  const std::string transcript = gbmr::serialize_transcript(r.transcript);
  if (out.empty()) {
    std::cout << transcript;
  } else {
    write_text(out, transcript);
  }
  if (!state_out.empty()) write_text(state_out, r.state.snapshot().dump(2) + "\n");
  return 0;
}

int run_validate_catalog(const std::string& file) {
  require_file(file);
  gbmr::Json doc;
  try {
    doc = gbmr::read_json_file(file);
  } catch (const gbmr::Error& e) {
    fail(1, std::string(gbmr::to_string(e.code())), e.what());
  }
  const std::vector<std::string> violations = gbmr::catalog_violations(doc);
  gbmr::Json report{{"file", file}, {"valid", violations.empty()}, {"violations", violations}};
  if (doc.is_object()) report["kind"] = doc.value("kind", std::string());
  std::cout << report.dump() << "\n";
  return violations.empty() ? 0 : 1;
}

int run_export_toolpath(const std::string& state_file, const std::string& out) {
  require_file(state_file);
  const gbmr::Json state = gbmr::read_json_file(state_file);
  if (!state.is_object() || !state.contains("toolpath") || state.at("toolpath").is_null()) {
    fail(1, "workflow_phase", "state file holds no toolpath");
  }
  gbmr::Toolpath tp;
  try {
    tp = state.at("toolpath").get<gbmr::Toolpath>();
  } catch (const gbmr::Json::exception& e) {
    fail(1, "parse_error", std::string("toolpath: ") + e.what());
  }
  write_text(out, gbmr::Json(tp).dump(2) + "\n");
  return 0;
}

// Script: {"workflow"?, "hand"?, "start"?, "period"?, "steps": [...]}, each
// step one of {"move": p}, {"tap": p}, {"pinch": {}}, {"drag": p},
// {"command": kind, "name"?, "value"?}, {"anchor": pose}.
int run_synth(const std::string& script, const std::string& out) {
  require_file(script);
  const gbmr::Json s = gbmr::read_json_file(script);
  try {
    gbmr::SyntheticHand hand(gbmr::parse_handedness(s.value("hand", std::string("right"))),
                             s.value("start", gbmr::TimestampMs{1000}), s.value("period", gbmr::TimestampMs{33}));
    for (const gbmr::Json& step : s.at("steps")) {
      if (step.contains("move")) {
        hand.move_to(gbmr::vec_from_json(step.at("move")));
      } else if (step.contains("tap")) {
        hand.tap(gbmr::vec_from_json(step.at("tap")));
      } else if (step.contains("pinch")) {
        hand.pinch();
      } else if (step.contains("drag")) {
        hand.drag_to(gbmr::vec_from_json(step.at("drag")), step.value("steps", 10));
      } else if (step.contains("command")) {
        gbmr::Command c;
        c.kind = gbmr::parse_command(step.at("command").get<std::string>());
        c.name = step.value("name", std::string());
        if (step.contains("value")) c.value = step.at("value");
        hand.command(c);
      } else if (step.contains("anchor")) {
        hand.anchor(step.at("anchor").get<gbmr::RigidTransform>());
      } else {
        fail(1, "parse_error", "unknown script step " + step.dump());
      }
    }
    std::optional<gbmr::WorkflowKind> workflow;
    if (s.contains("workflow")) workflow = gbmr::parse_workflow(s.at("workflow").get<std::string>());
    write_text(out, gbmr::serialize_log(hand.log(workflow)));
  } catch (const gbmr::Json::exception& e) {
    fail(1, "parse_error", std::string("script: ") + e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gesture-driven fabrication session engine"};
  app.require_subcommand(1);

  std::string workflow, catalog, job, out, file, state_out, address = "127.0.0.1";
  unsigned short port = 8765;
  int threads = 2;

  CLI::App* serve = app.add_subcommand("serve", "Serve sessions over WebSocket");
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--workflow", workflow, "Default workflow for new sessions")->required();
  serve->add_option("--catalog", catalog, "Layer or tube catalog JSON");
  serve->add_option("--job", job, "Calibration / QC / cutting job JSON");
  serve->add_option("--threads", threads, "I/O threads")->check(CLI::PositiveNumber);

  CLI::App* replay = app.add_subcommand("replay", "Replay a gesture log and print the transcript");
  replay->add_option("file", file, "Gesture log (JSONL)")->required();
  replay->add_option("--workflow", workflow, "Workflow (defaults to the log header)");
  replay->add_option("--out", out, "Transcript output file");
  replay->add_option("--catalog", catalog, "Layer or tube catalog JSON");
  replay->add_option("--job", job, "Calibration / QC / cutting job JSON");
  replay->add_option("--state-out", state_out, "Write the final session state JSON here");

  CLI::App* validate = app.add_subcommand("validate-catalog", "Check a catalog file");
  validate->add_option("file", file, "Catalog JSON")->required();

  CLI::App* exporter = app.add_subcommand("export-toolpath", "Extract the toolpath from a saved session state");
  exporter->add_option("state", file, "Session state JSON (from replay --state-out)")->required();
  exporter->add_option("--out", out, "Toolpath JSON output file")->required();

  CLI::App* synth = app.add_subcommand("synth", "Render a scripted synthetic-hand session into a gesture log");
  synth->add_option("script", file, "Script JSON")->required();
  synth->add_option("--out", out, "Gesture log output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << gbmr::Json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (*serve) return run_serve(address, port, workflow, catalog, job, threads);
    if (*replay) return run_replay(file, workflow, out, catalog, job, state_out);
    if (*validate) return run_validate_catalog(file);
    if (*exporter) return run_export_toolpath(file, out);
    if (*synth) return run_synth(file, out);
  } catch (const CliFailure& f) {
    std::cerr << gbmr::Json{{"error", f.code}, {"message", f.message}}.dump() << "\n";
    return f.status;
  } catch (const gbmr::Error& e) {
    std::cerr << gbmr::Json{{"error", gbmr::to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 1;
}
