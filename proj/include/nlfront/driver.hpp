#pragma once

#include <json.hpp>

#include "nlfront/run_config.hpp"

namespace nlfront {

/// Outcome of the full front pipeline: sub/super pair, recursion trace, the
/// refined accepted front, and the direct-simulation cross-check.
struct FrontPipelineResult {
    SubSuperPair pair;
    ExtractResult extraction;
    FrontResult front;          // refined accepted front
    double c_measured = 0.0;    // measure_speed oracle
    double c_half_step = 0.0;   // refined speed at half grid step (when checked)
    bool half_step_checked = false;
    nlohmann::json report;
};

FrontPipelineResult run_front_pipeline(const RunConfig& cfg, int jobs = 1);

nlohmann::json run_simulate(const RunConfig& cfg);
nlohmann::json run_bounds(const RunConfig& cfg);
nlohmann::json run_hypotheses(const RunConfig& cfg);
nlohmann::json run_mgf_check(const RunConfig& cfg);
nlohmann::json run_subsuper_check(const RunConfig& cfg);

/// Writes the per-command artifacts (reports, CSVs, optional SVGs) into
/// cfg.out_dir; a no-op for an empty dir.
void write_front_outputs(const RunConfig& cfg, const FrontPipelineResult& r);

}  // namespace nlfront
