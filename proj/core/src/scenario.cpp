#include "cansim/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cansim {

namespace {

using nlohmann::json;

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string(what) + ": " + err.what());
  }
}

double get_number(const json& doc, const char* field, std::optional<double> fallback = {}) {
  if (!doc.contains(field)) {
    if (fallback) return *fallback;
    throw ValidationError(std::string("scenario: field \"") + field + "\" is required");
  }
  if (!doc[field].is_number())
    throw ValidationError(std::string("scenario: field \"") + field + "\" must be a number");
  return doc[field].get<double>();
}

Eigen::VectorXd get_vector(const json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_array())
    throw ValidationError(std::string("scenario: field \"") + field + "\" must be an array");
  Eigen::VectorXd v(doc[field].size());
  Eigen::Index i = 0;
  for (const auto& item : doc[field]) v(i++) = item.get<double>();
  return v;
}

Waveform waveform_from_string(const std::string& s) {
  if (s == "zero") return Waveform::kZero;
  if (s == "const" || s == "constant") return Waveform::kConstant;
  if (s == "sin") return Waveform::kSin;
  if (s == "cos") return Waveform::kCos;
  throw ValidationError("scenario: disturbance type must be zero|const|sin|cos, got \"" + s + "\"");
}

const char* waveform_to_string(Waveform w) {
  switch (w) {
    case Waveform::kZero: return "zero";
    case Waveform::kConstant: return "const";
    case Waveform::kSin: return "sin";
    case Waveform::kCos: return "cos";
  }
  return "zero";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json complex_summary(const Eigen::VectorXcd& values) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i)
    arr.push_back({{"re", values(i).real()}, {"im", values(i).imag()}});
  return arr;
}

}  // namespace

namespace {

Scenario parse_scenario_fields(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ValidationError("scenario JSON: top-level value must be an object");

  Scenario scn;
  if (doc.contains("graph")) {
    scn.graph = parse_graph(doc["graph"].dump());
  } else if (doc.contains("graph_file")) {
    const std::filesystem::path p = base_dir / doc["graph_file"].get<std::string>();
    scn.graph = parse_graph(read_file(p));
  } else {
    throw ValidationError("scenario: either \"graph\" or \"graph_file\" is required");
  }

  const std::string mode = doc.value("mode", std::string("nominal"));
  if (mode == "nominal")
    scn.mode = Mode::kNominal;
  else if (mode == "sliding")
    scn.mode = Mode::kSliding;
  else
    throw ValidationError("scenario: mode must be \"nominal\" or \"sliding\"");

  ProtocolParams& p = scn.params;
  p.rho1 = get_number(doc, "rho1");
  p.rho2 = get_number(doc, "rho2");
  p.kappa = get_number(doc, "kappa");
  p.guard_factor = get_number(doc, "epsilon_factor", kDefaultGuardFactor);
  if (scn.mode == Mode::kNominal) {
    p.t1 = get_number(doc, "T1");
  } else {
    p.tr = get_number(doc, "Tr");
    p.ts = get_number(doc, "Ts");
    p.mu1 = get_number(doc, "mu1");
    p.mu2 = get_number(doc, "mu2");
    p.mu3 = get_number(doc, "mu3");
    p.delta = get_number(doc, "delta", 0.0);
    p.boundary_layer = get_number(doc, "boundary_layer", 1e-4);
    scn.sigma0 = get_vector(doc, "sigma0");
  }

  scn.x0 = get_vector(doc, "x0");
  scn.t_end = get_number(doc, "t_end");
  scn.h = get_number(doc, "h", 1e-3);
  scn.stride = static_cast<int>(get_number(doc, "stride", 1.0));
  scn.seed = static_cast<unsigned>(get_number(doc, "seed", 0.0));

  if (doc.contains("disturbance") && !doc["disturbance"].is_null()) {
    const json& d = doc["disturbance"];
    const Waveform kind = waveform_from_string(d.value("type", std::string("zero")));
    const double amplitude = d.value("amplitude", 1.0);
    const double omega = d.value("omega", 0.0);
    const double omega_per_index = d.value("omega_per_index", 0.0);
    const double phase = d.value("phase", 0.0);
    scn.disturbance =
        DisturbanceSpec::uniform(scn.graph.n, kind, amplitude, omega, omega_per_index, phase);
  }

  scn.validate();
  return scn;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc = parse_document(json_text, "scenario JSON");
  try {
    return parse_scenario_fields(doc, base_dir);
  } catch (const json::exception& err) {
    throw ValidationError(std::string("scenario JSON: ") + err.what());
  }
}

std::string scenario_to_json(const Scenario& scn) {
  json doc;
  doc["graph"] = json::parse(graph_to_json(scn.graph));
  doc["mode"] = to_string(scn.mode);
  doc["rho1"] = scn.params.rho1;
  doc["rho2"] = scn.params.rho2;
  doc["kappa"] = scn.params.kappa;
  doc["epsilon_factor"] = scn.params.guard_factor;
  if (scn.mode == Mode::kNominal) {
    doc["T1"] = scn.params.t1;
  } else {
    doc["Tr"] = scn.params.tr;
    doc["Ts"] = scn.params.ts;
    doc["mu1"] = scn.params.mu1;
    doc["mu2"] = scn.params.mu2;
    doc["mu3"] = scn.params.mu3;
    doc["delta"] = scn.params.delta;
    doc["boundary_layer"] = scn.params.boundary_layer;
    doc["sigma0"] = to_json(scn.sigma0);
  }
  doc["x0"] = to_json(scn.x0);
  doc["t_end"] = scn.t_end;
  doc["h"] = scn.h;
  doc["stride"] = scn.stride;
  doc["seed"] = scn.seed;
  if (scn.disturbance) {
    // The uniform factory keeps one waveform across agents with an
    // index-proportional frequency; recover those knobs from the channels.
    const auto& ch = scn.disturbance->channels;
    json d;
    d["type"] = waveform_to_string(ch.front().kind);
    d["amplitude"] = ch.front().amplitude;
    const double per_index = ch.size() > 1 ? ch[1].omega - ch[0].omega : 0.0;
    d["omega"] = ch.front().omega - per_index;
    d["omega_per_index"] = per_index;
    d["phase"] = ch.front().phase;
    doc["disturbance"] = d;
  }
  return doc.dump(2);
}

std::vector<std::string> scenario_notices(const Scenario& scn) {
  std::vector<std::string> notices;
  if (scn.params.kappa <= 2.0) {
    std::ostringstream os;
    os << "kappa = " << scn.params.kappa
       << " is at or below 2; accepted (the gain stays valid for any kappa > 0) but outside "
          "the conservative design range";
    notices.push_back(os.str());
  }
  return notices;
}

bool ScenarioResult::all_pass() const {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

ScenarioResult run_scenario(const Scenario& scn) {
  ScenarioResult result;
  result.analysis = analyze(scn.graph);
  result.trajectory = simulate(scn);
  result.notices = scenario_notices(scn);

  const double t_settle = scn.settling_time();
  const double tol = default_tolerance(scn.x0);
  const bool disturbed = scn.disturbance.has_value() && scn.disturbance->bound() > 0.0;

  if (scn.mode == Mode::kSliding)
    result.verdicts.push_back(
        check_sliding_reach(result.trajectory, scn.params.tr, tol, scn.params.boundary_layer));

  switch (result.analysis.connectivity) {
    case Connectivity::kStrong:
      result.verdicts.push_back(
          result.analysis.cscs[0].balance.balanced
              ? check_bipartite_consensus(result.trajectory, t_settle, tol)
              : check_stability(result.trajectory, t_settle, tol));
      break;
    case Connectivity::kQuasiStrong:
      result.verdicts.push_back(
          result.analysis.cscs[0].balance.balanced
              ? check_interval_bipartite(result.trajectory, result.analysis, t_settle, tol)
              : check_stability(result.trajectory, t_settle, tol));
      break;
    case Connectivity::kWeak:
      result.verdicts.push_back(
          result.analysis.any_balanced_csc()
              ? check_bipartite_containment(result.trajectory, result.analysis, t_settle, tol)
              : check_stability(result.trajectory, t_settle, tol));
      break;
    case Connectivity::kDisconnected:
      throw ValidationError("run_scenario: graph must be at least weakly connected");
  }

  // Exact limit values only hold without a reaching phase or disturbance.
  if (!disturbed && scn.mode == Mode::kNominal && !scn.disable_protocol) {
    result.predicted = predicted_limits(result.analysis, scn.x0);
    const std::size_t start = result.trajectory.index_at(t_settle);
    Verdict v{"predicted_limit", false, 0.0, tol, t_settle, ""};
    for (std::size_t i = start; i < result.trajectory.t.size(); ++i)
      v.residual = std::max(
          v.residual,
          (result.trajectory.x.row(i).transpose() - result.predicted->state).cwiseAbs().maxCoeff());
    v.pass = v.residual <= tol;
    v.details = std::string("limit kind: ") + to_string(result.predicted->kind);
    result.verdicts.push_back(v);
  }
  return result;
}

std::vector<BatchResult> run_batch(const std::vector<std::pair<std::string, Scenario>>& scenarios,
                                   int jobs) {
  std::vector<BatchResult> results(scenarios.size());
  auto run_one = [&](std::size_t i) {
    results[i].name = scenarios[i].first;
    try {
      results[i].result = run_scenario(scenarios[i].second);
    } catch (const std::exception& err) {
      results[i].error = err.what();
    }
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) run_one(i);
    return results;
  }
  std::vector<std::future<void>> inflight;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (static_cast<int>(inflight.size()) >= jobs) {
      inflight.front().wait();
      inflight.erase(inflight.begin());
    }
    inflight.push_back(std::async(std::launch::async, run_one, i));
  }
  for (auto& f : inflight) f.wait();
  return results;
}

std::string trajectory_csv(const Trajectory& traj) {
  const int n = traj.n_agents();
  const bool sliding = traj.sigma.rows() > 0;
  std::ostringstream os;
  os << "t";
  for (int k = 1; k <= n; ++k) os << ",x_" << k;
  if (sliding)
    for (int k = 1; k <= n; ++k) os << ",sigma_" << k;
  for (int k = 1; k <= n; ++k) os << ",u_" << k;
  os << "\n";

  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    put(traj.t[i]);
    for (int k = 0; k < n; ++k) {
      os << ',';
      put(traj.x(i, k));
    }
    if (sliding)
      for (int k = 0; k < n; ++k) {
        os << ',';
        put(traj.sigma(i, k));
      }
    for (int k = 0; k < n; ++k) {
      os << ',';
      put(traj.u(i, k));
    }
    os << "\n";
  }
  return os.str();
}

std::string verdicts_json(const ScenarioResult& result) {
  json doc;
  doc["all_pass"] = result.all_pass();
  doc["verdicts"] = json::array();
  for (const Verdict& v : result.verdicts)
    doc["verdicts"].push_back({{"property", v.property},
                               {"pass", v.pass},
                               {"residual", v.residual},
                               {"tol", v.tol},
                               {"t_eval", v.t_eval},
                               {"details", v.details}});
  if (result.predicted) {
    doc["predicted_limit"] = {{"kind", to_string(result.predicted->kind)},
                              {"state", to_json(result.predicted->state)},
                              {"consensus_value", result.predicted->consensus_value},
                              {"csc_limits", to_json(result.predicted->leader_values)}};
  }
  doc["notices"] = result.notices;
  json events = json::array();
  for (const auto& ev : result.trajectory.events)
    events.push_back({{"name", ev.name}, {"time", ev.time}});
  doc["events"] = events;
  return doc.dump(2);
}

std::string analysis_report_json(const GraphAnalysis& a) {
  json doc;
  doc["n"] = a.graph.n;
  doc["connectivity"] = to_string(a.connectivity);
  doc["balanced"] = a.whole_balance.balanced;
  if (a.whole_balance.balanced) doc["gauge"] = to_json(a.whole_balance.gauge);
  if (!a.whole_balance.balanced) {
    json witness = json::array();
    for (const Edge& e : a.whole_balance.witness)
      witness.push_back({{"from", e.from + 1}, {"to", e.to + 1}, {"w", e.weight}});
    doc["witness"] = witness;
  }

  json sccs = json::array();
  for (const auto& scc : a.partition.sccs) {
    json nodes = json::array();
    for (int v : scc) nodes.push_back(v + 1);
    sccs.push_back(nodes);
  }
  doc["sccs"] = sccs;
  doc["closed"] = a.partition.closed;
  json leaders = json::array(), followers = json::array();
  for (int v : a.partition.leaders) leaders.push_back(v + 1);
  for (int v : a.partition.followers) followers.push_back(v + 1);
  doc["leaders"] = leaders;
  doc["followers"] = followers;
  doc["csc_count"] = a.partition.csc_count;
  doc["K"] = a.partition.leader_count;

  json cscs = json::array();
  for (const auto& csc : a.cscs) {
    json entry;
    json nodes = json::array();
    for (int v : csc.nodes) nodes.push_back(v + 1);
    entry["nodes"] = nodes;
    entry["balanced"] = csc.balance.balanced;
    if (csc.balance.balanced) entry["gauge"] = to_json(csc.balance.gauge);
    entry["p"] = to_json(csc.perron.p);
    if (csc.balance.balanced && csc.nodes.size() >= 2) entry["a"] = csc.balance_gap;
    entry["eigenvalues"] = complex_summary(csc.eigenvalues);
    if (csc.stabilizer) entry["stabilizer"] = to_json(*csc.stabilizer);
    cscs.push_back(entry);
  }
  doc["cscs"] = cscs;

  if (a.weights) {
    if (a.partition.csc_count == 1) {
      doc["zeta"] = to_json(a.weights->zeta());
    } else {
      json varpi = json::array();
      for (Eigen::Index j = 0; j < a.weights->varpi.rows(); ++j)
        varpi.push_back(to_json(a.weights->varpi.row(j).transpose()));
      doc["varpi"] = varpi;
    }
    doc["follower_eigenvalues"] = complex_summary(a.follower_eigenvalues);
    if (a.follower_stabilizer) doc["follower_stabilizer"] = to_json(*a.follower_stabilizer);
  }

  // Greppable one-line summary: class, balance, gauge signs.
  std::ostringstream summary;
  summary << to_string(a.connectivity) << ", "
          << (a.whole_balance.balanced ? "balanced" : "unbalanced");
  if (a.whole_balance.balanced) {
    summary << ", gauge (";
    for (Eigen::Index i = 0; i < a.whole_balance.gauge.size(); ++i)
      summary << (i ? "," : "") << (a.whole_balance.gauge(i) > 0 ? "+" : "-");
    summary << ")";
  }
  doc["summary"] = summary.str();
  return doc.dump(2);
}

}  // namespace cansim
