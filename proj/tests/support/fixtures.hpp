#pragma once

// Fixture files and the session configuration each recorded log expects.

#include <filesystem>
#include <memory>

#include "gbmr/protocol.hpp"

namespace gbmr::fixtures {

inline const std::filesystem::path kDir = GBMR_FIXTURE_DIR;

inline constexpr WorkflowKind kAllWorkflows[] = {
    WorkflowKind::log_halving, WorkflowKind::half_log_cutting, WorkflowKind::layer_template,
    WorkflowKind::tube_index,  WorkflowKind::hexnut_jig,       WorkflowKind::panel_qc,
};

inline std::filesystem::path log_path(WorkflowKind k) {
  return kDir / "logs" / (std::string(to_string(k)) + ".jsonl");
}

/// Catalog or job file the recorded log for `k` was made against, if any.
inline std::pair<std::string, std::string> inputs(WorkflowKind k) {
  switch (k) {
    case WorkflowKind::half_log_cutting: return {"", "cutting_job.json"};
    case WorkflowKind::layer_template: return {"layers.json", ""};
    case WorkflowKind::tube_index: return {"tubes_54.json", ""};
    case WorkflowKind::hexnut_jig: return {"", "hexnut_job.json"};
    case WorkflowKind::panel_qc: return {"", "panel_job.json"};
    default: return {"", ""};
  }
}

inline SessionConfig config(WorkflowKind k) {
  SessionConfig cfg;
  cfg.workflow = k;
  const auto [catalog, job] = inputs(k);
  if (!catalog.empty()) {
    LoadedCatalog c = catalog_from_json(read_json_file(kDir / catalog));
    if (c.layers) cfg.layers = std::make_shared<const TemplateCatalog>(std::move(*c.layers));
    if (c.tubes) cfg.tubes = std::make_shared<const TubeCatalog>(std::move(*c.tubes));
  }
  if (!job.empty()) apply_job(cfg, job_from_json(read_json_file(kDir / job)));
  return cfg;
}

}  // namespace gbmr::fixtures
