#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "cansim/dynamics.hpp"

namespace cansim {

enum class Mode { kNominal, kSliding };

const char* to_string(Mode m);

/// One closed-loop run: graph, protocol, initial data, and the time grid.
struct Scenario {
  SignedDigraph graph;
  Mode mode = Mode::kNominal;
  ProtocolParams params;
  std::optional<DisturbanceSpec> disturbance;
  Eigen::VectorXd x0;
  Eigen::VectorXd sigma0;  // sliding runs only; varsigma(0) = sigma0 - x0
  double t_end = 0.0;
  double h = 1e-3;   // base integration step
  int stride = 1;    // record every stride-th base step
  unsigned seed = 0;
  bool disable_protocol = false;  // diagnostic: integrate xdot = d only

  double settling_time() const;  // t1 or tr + ts
  void validate() const;
};

/// Sampled closed-loop run. The grid is strictly increasing and contains the
/// reaching and settling times exactly; verdicts read event samples rather
/// than interpolations.
struct Trajectory {
  std::vector<double> t;
  Eigen::MatrixXd x;      // one row per sample
  Eigen::MatrixXd sigma;  // zero rows for nominal runs
  Eigen::MatrixXd u;
  Eigen::MatrixXd d;

  struct Event {
    std::string name;
    double time = 0.0;
    std::ptrdiff_t index = -1;
  };
  std::vector<Event> events;

  int n_agents() const { return static_cast<int>(x.cols()); }
  /// Index of the sample at `time` (1e-9 relative tolerance); throws
  /// ValidationError when the grid does not contain it.
  std::size_t index_at(double time) const;
};

/// Integrates the closed loop with the classic explicit fourth-order
/// one-step scheme. The effective step is min(h, (T - t)/20) ahead of every
/// active settling time (floored at half the clamp guard), is capped for
/// stiff boundary-layer dynamics, and for exact-sign sliding runs is
/// additionally capped at the estimated time to the next sign crossing.
/// Throws NumericalError when the state stops being finite.
Trajectory simulate(const Scenario& scenario);

/// Independent runs; results ordered as the inputs. Failures are collected
/// per entry, never fatal to the batch. jobs <= 1 runs sequentially.
struct BatchEntry {
  std::optional<Trajectory> trajectory;
  std::string error;
};
std::vector<BatchEntry> simulate_batch(const std::vector<Scenario>& scenarios, int jobs = 1);

}  // namespace cansim
