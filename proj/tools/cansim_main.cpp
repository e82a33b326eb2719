// cansim: analyze / simulate / verify prescribed-time coordination scenarios
// on signed digraphs.
//
// Exit codes: 0 success (all verdicts pass), 1 verdict failure,
// 2 input error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cansim/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw cansim::ValidationError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cansim::ValidationError("cannot write file: " + path.string());
  out << content;
}

void apply_seed_override(cansim::Scenario& scn) {
  if (const char* env = std::getenv("CANSIM_SEED")) scn.seed = std::strtoul(env, nullptr, 10);
}

void print_verdicts(const cansim::ScenarioResult& result, std::ostream& os) {
  for (const auto& v : result.verdicts) {
    os << v.property << ": " << (v.pass ? "pass" : "FAIL") << " (residual " << v.residual
       << " vs tol " << v.tol << " at t = " << v.t_eval << ")";
    if (!v.details.empty()) os << " [" << v.details << "]";
    os << "\n";
  }
  for (const auto& note : result.notices) os << "notice: " << note << "\n";
}

int write_outputs(const cansim::Scenario& scn, const cansim::ScenarioResult& result,
                  const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_file(out_dir / "trajectory.csv", cansim::trajectory_csv(result.trajectory));
  write_file(out_dir / "verdicts.json", cansim::verdicts_json(result));
  write_file(out_dir / "params.json", cansim::scenario_to_json(scn));
  print_verdicts(result, std::cout);
  return result.all_pass() ? kExitOk : kExitVerdictFailure;
}

int cmd_analyze(const fs::path& graph_path, bool with_stabilizers, unsigned seed) {
  cansim::SignedDigraph g = cansim::parse_graph(read_file(graph_path));
  cansim::AnalyzeOptions options;
  options.with_stabilizers = with_stabilizers;
  options.seed = seed;
  if (const char* env = std::getenv("CANSIM_SEED"))
    options.seed = std::strtoul(env, nullptr, 10);
  cansim::GraphAnalysis analysis = cansim::analyze(g, options);
  std::cout << cansim::analysis_report_json(analysis) << "\n";
  return kExitOk;
}

int cmd_simulate(const fs::path& scenario_path, const fs::path& out_dir) {
  cansim::Scenario scn =
      cansim::parse_scenario(read_file(scenario_path), scenario_path.parent_path());
  apply_seed_override(scn);
  cansim::ScenarioResult result = cansim::run_scenario(scn);
  return write_outputs(scn, result, out_dir);
}

int cmd_demo(const std::string& name, const fs::path& out_dir) {
  cansim::Scenario scn = cansim::demo_scenario(name);
  apply_seed_override(scn);
  cansim::ScenarioResult result = cansim::run_scenario(scn);
  return write_outputs(scn, result, out_dir);
}

int cmd_batch(const fs::path& manifest_path, const fs::path& out_dir, int jobs) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& err) {
    throw cansim::ParseError(std::string("batch manifest: ") + err.what());
  }
  const json& list = manifest.is_array() ? manifest : manifest.at("scenarios");
  if (!list.is_array())
    throw cansim::ValidationError("batch manifest: expected an array of scenarios");

  // Per-entry parse or validation problems are collected like run failures,
  // never fatal to the batch.
  std::vector<std::pair<std::string, cansim::Scenario>> runnable;
  struct Slot {
    std::string name;
    std::string load_error;
    std::size_t run_index = 0;  // into `runnable` when load_error is empty
  };
  std::vector<Slot> slots;
  const fs::path base = manifest_path.parent_path();
  int index = 0;
  for (const auto& item : list) {
    Slot slot;
    try {
      cansim::Scenario scn;
      if (item.is_string()) {
        const fs::path p = base / item.get<std::string>();
        slot.name = p.stem().string();
        scn = cansim::parse_scenario(read_file(p), p.parent_path());
      } else if (item.is_object() && item.contains("file")) {
        const fs::path p = base / item["file"].get<std::string>();
        slot.name = item.value("name", p.stem().string());
        scn = cansim::parse_scenario(read_file(p), p.parent_path());
      } else if (item.is_object() && item.contains("scenario")) {
        slot.name = item.value("name", "scenario_" + std::to_string(index));
        scn = cansim::parse_scenario(item["scenario"].dump(), base);
      } else {
        throw cansim::ValidationError(
            "batch manifest: entries must be a path or an object with \"file\" or \"scenario\"");
      }
      apply_seed_override(scn);
      slot.run_index = runnable.size();
      runnable.emplace_back(slot.name, std::move(scn));
    } catch (const std::exception& err) {
      if (slot.name.empty()) slot.name = "scenario_" + std::to_string(index);
      slot.load_error = err.what();
    }
    slots.push_back(std::move(slot));
    ++index;
  }

  auto results = cansim::run_batch(runnable, jobs);

  fs::create_directories(out_dir);
  json report;
  report["runs"] = json::array();
  int exit_code = kExitOk;
  for (const Slot& slot : slots) {
    json entry;
    entry["name"] = slot.name;
    if (!slot.load_error.empty()) {
      entry["error"] = slot.load_error;
      exit_code = std::max(exit_code, kExitInputError);
      std::cout << slot.name << ": error: " << slot.load_error << "\n";
    } else {
      const auto& res = results[slot.run_index];
      if (res.result) {
        const fs::path run_dir = out_dir / slot.name;
        fs::create_directories(run_dir);
        write_file(run_dir / "trajectory.csv", cansim::trajectory_csv(res.result->trajectory));
        write_file(run_dir / "verdicts.json", cansim::verdicts_json(*res.result));
        write_file(run_dir / "params.json",
                   cansim::scenario_to_json(runnable[slot.run_index].second));
        entry["all_pass"] = res.result->all_pass();
        if (!res.result->all_pass()) exit_code = std::max(exit_code, kExitVerdictFailure);
        std::cout << slot.name << ": " << (res.result->all_pass() ? "pass" : "verdict FAIL")
                  << "\n";
      } else {
        entry["error"] = res.error;
        exit_code = std::max(exit_code, kExitNumericalError);
        std::cout << slot.name << ": error: " << res.error << "\n";
      }
    }
    report["runs"].push_back(entry);
  }
  write_file(out_dir / "batch_report.json", report.dump(2));
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prescribed-time coordination control of cooperative-antagonistic networks: "
               "graph analysis, closed-loop simulation, and convergence verdicts"};
  app.require_subcommand(1);

  std::string graph_path, scenario_path, demo_name, manifest_path, out_dir = "out";
  bool with_stabilizers = false;
  unsigned seed = 0;
  int jobs = 1;

  auto* analyze = app.add_subcommand("analyze", "Print the graph analysis report as JSON");
  analyze->add_option("graph", graph_path, "Graph JSON file")->required();
  analyze->add_flag("--stabilizers", with_stabilizers,
                    "Also search for diagonal stabilizer certificates");
  analyze->add_option("--seed", seed, "Seed for the stabilizer search");

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its artifacts");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* demo = app.add_subcommand("demo", "Run a packaged demo scenario (ex1a..ex6b)");
  demo->add_option("name", demo_name, "Demo name")->required();
  demo->add_option("--out", out_dir, "Output directory")->required();

  auto* batch = app.add_subcommand("batch", "Run every scenario in a manifest");
  batch->add_option("manifest", manifest_path, "Manifest JSON file")->required();
  batch->add_option("--out", out_dir, "Output directory")->required();
  batch->add_option("--jobs", jobs, "Parallel scenario runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(graph_path, with_stabilizers, seed);
    if (*simulate) return cmd_simulate(scenario_path, out_dir);
    if (*demo) return cmd_demo(demo_name, out_dir);
    if (*batch) return cmd_batch(manifest_path, out_dir, jobs);
  } catch (const cansim::ValidationError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitInputError;
  } catch (const cansim::NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return kExitNumericalError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumericalError;
  }
  return kExitOk;
}
