#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cansim/verify.hpp"

namespace cansim {

/// Parses a scenario document. Graphs may be inline ("graph": {...}) or a
/// file reference ("graph_file": "path") resolved against base_dir. All
/// defaults are filled in, cross-field rules are enforced (sliding runs need
/// sigma0 and mu1 > delta; t_end must not precede the settling time), and
/// the result is ready for simulate().
Scenario parse_scenario(const std::string& json_text,
                        const std::filesystem::path& base_dir = ".");

/// Fully resolved scenario echo (graph inline, every default explicit).
/// Feeding the output back through parse_scenario reproduces the run.
std::string scenario_to_json(const Scenario& scenario);

/// Advisory notes attached to a scenario (currently: gain exponents at or
/// below 2, where the conservative convergence argument does not apply even
/// though any positive exponent is accepted).
std::vector<std::string> scenario_notices(const Scenario& scenario);

struct ScenarioResult {
  Trajectory trajectory;
  GraphAnalysis analysis;
  std::vector<Verdict> verdicts;
  std::optional<PredictedLimit> predicted;  // disturbance-free runs only
  std::vector<std::string> notices;

  bool all_pass() const;
};

/// Simulates and runs the verdict suite implied by the graph class:
/// stability / bipartite consensus / interval bipartite / containment at the
/// settling time, plus sliding_reach for sliding runs and a predicted-limit
/// comparison for disturbance-free runs.
ScenarioResult run_scenario(const Scenario& scenario);

struct BatchResult {
  std::string name;
  std::optional<ScenarioResult> result;
  std::string error;
};

/// Independent runs, optionally in parallel; result order matches input
/// order and per-scenario failures are collected rather than thrown.
std::vector<BatchResult> run_batch(const std::vector<std::pair<std::string, Scenario>>& scenarios,
                                   int jobs = 1);

/// Trajectory CSV: header t,x_1..x_N[,sigma_*][,u_*], one row per sample,
/// 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

std::string verdicts_json(const ScenarioResult& result);

/// Analysis report: connectivity class, CSC list, balance verdicts, gauges,
/// Perron vectors, balance gaps, zeta/varpi, eigenvalue summaries, and
/// stabilizer diagonals when computed.
std::string analysis_report_json(const GraphAnalysis& analysis);

/// Packaged demo scenarios (ex1a..ex6b). Suffix a/b picks the two graph
/// variants of each numbered example.
std::vector<std::string> demo_names();
Scenario demo_scenario(const std::string& name);

}  // namespace cansim
