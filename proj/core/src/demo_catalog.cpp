#include "cansim/scenario.hpp"

#include <cmath>

#include "cansim_demo_graph_data.hpp"

namespace cansim {

namespace {

constexpr double kPi = 3.14159265358979323846;

SignedDigraph demo_graph(const std::string& name) {
  const auto& graphs = detail::demo_graph_json();
  auto it = graphs.find(name);
  if (it == graphs.end()) throw ValidationError("unknown demo graph: " + name);
  return parse_graph(it->second);
}

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"ex1a", "ex1b", "ex2a", "ex2b", "ex3a", "ex3b",
          "ex4a", "ex4b", "ex5a", "ex5b", "ex6a", "ex6b"};
}

Scenario demo_scenario(const std::string& name) {
  Scenario scn;
  const std::string variant = name.size() == 4 ? name.substr(3) : "";
  if (variant != "a" && variant != "b") throw ValidationError("unknown demo name: " + name);
  const std::string which = name.substr(0, 3);

  if (which == "ex1") {
    scn.graph = demo_graph("ex1" + variant);
    scn.mode = Mode::kNominal;
    scn.params.rho1 = 0.1;
    scn.params.rho2 = 0.3;
    scn.params.kappa = 1.0;
    scn.params.t1 = 0.6;
    scn.x0 = vec({5, 2, -4, 3, -2, 1});
    scn.t_end = 0.8;
    scn.h = 5e-4;
    scn.stride = 4;
  } else if (which == "ex2") {
    scn.graph = demo_graph("ex2" + variant);
    scn.mode = Mode::kNominal;
    scn.params.rho1 = 0.2;
    scn.params.rho2 = 0.5;
    scn.params.kappa = 1.0;
    scn.params.t1 = 0.6;
    scn.x0 = vec({-4, 3, -1, 2, -2, 5});
    scn.t_end = 0.8;
    scn.h = 5e-4;
    scn.stride = 4;
  } else if (which == "ex3") {
    scn.graph = demo_graph("ex3" + variant);
    scn.mode = Mode::kNominal;
    scn.params.rho1 = 0.1;
    scn.params.rho2 = 0.3;
    scn.params.kappa = 1.0;
    scn.params.t1 = 0.2;
    scn.x0 = vec({-6, 4, 5, -7, 8, -5, -3, 7, -5, 6, 4, 2, -5, 3, -8, 1});
    scn.t_end = 0.3;
    scn.h = 2e-4;
    scn.stride = 5;
  } else if (which == "ex4") {
    scn.graph = demo_graph("ex1" + variant);
    scn.mode = Mode::kSliding;
    scn.params.rho1 = 0.1;
    scn.params.rho2 = 0.3;
    scn.params.kappa = 2.0;
    scn.params.tr = 0.5;
    scn.params.ts = 1.0;
    scn.params.mu1 = 1.2;
    scn.params.mu2 = 0.6;
    scn.params.mu3 = 0.9;
    scn.params.delta = 1.0;
    scn.disturbance = DisturbanceSpec::uniform(6, Waveform::kSin, 1.0, 0.0, 2.0, kPi / 3.0);
    scn.x0 = vec({-4, 3, -1, 2, -2, 5});
    scn.sigma0 = vec({-9, 1, -5, 8, -4, 6});
    scn.t_end = 2.0;
    scn.h = 5e-4;
    scn.stride = 4;
  } else if (which == "ex5") {
    scn.graph = demo_graph("ex2" + variant);
    scn.mode = Mode::kSliding;
    scn.params.rho1 = 0.25;
    scn.params.rho2 = 0.3;
    scn.params.kappa = 3.0;
    scn.params.tr = 1.0;
    scn.params.ts = 0.5;
    scn.params.mu1 = 2.0;
    scn.params.mu2 = 0.4;
    scn.params.mu3 = 0.5;
    scn.params.delta = 1.0;
    scn.disturbance = DisturbanceSpec::uniform(6, Waveform::kSin, 1.0, 0.0, 2.0, kPi / 2.0);
    scn.x0 = vec({-4, 4, 5, -7, 8, 1});
    scn.sigma0 = vec({-10, 10, 9, -5, 5, 4});
    scn.t_end = 2.0;
    scn.h = 5e-4;
    scn.stride = 4;
  } else if (which == "ex6") {
    scn.graph = demo_graph("ex3" + variant);
    scn.mode = Mode::kSliding;
    scn.params.rho1 = 0.2;
    scn.params.rho2 = 0.1;
    scn.params.kappa = 3.0;
    scn.params.tr = 0.4;
    scn.params.ts = 0.6;
    scn.params.mu1 = 2.0;
    scn.params.mu2 = 0.1;
    scn.params.mu3 = 0.5;
    scn.params.delta = 1.0;
    scn.disturbance = DisturbanceSpec::uniform(16, Waveform::kCos, 1.0, 0.0, 1.0, -kPi / 3.0);
    scn.x0 = vec({2.6, -1.2, -1.2, -1, -0.2, 0.9, -2.9, 2, 0.3, 2.1, -1, -0.3, -2.7, -2, 1, -1});
    scn.sigma0 =
        vec({2.9, -3, 0.5, 0, 0.75, -0.8, -1.5, 3.8, 2.3, 3.6, 0.2, -0.27, -4, -2.3, -0.5, -2.9});
    scn.t_end = 1.4;
    scn.h = 2e-4;
    scn.stride = 5;
  } else {
    throw ValidationError("unknown demo name: " + name);
  }
  scn.validate();
  return scn;
}

}  // namespace cansim
