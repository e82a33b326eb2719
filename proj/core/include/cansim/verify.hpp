#pragma once

#include <span>
#include <string>

#include "cansim/analysis.hpp"
#include "cansim/simulator.hpp"

namespace cansim {

enum class LimitKind { kStability, kBipartiteConsensus, kIntervalBipartite, kContainment };

const char* to_string(LimitKind k);

/// Algebraically predicted limit of a disturbance-free run.
struct PredictedLimit {
  LimitKind kind = LimitKind::kStability;
  Eigen::VectorXd state;           // per agent, original node order
  double consensus_value = 0.0;    // c (bipartite) or the leader magnitude
  Eigen::VectorXd leader_values;   // per-CSC limits x_k* (containment)
};

/// Limit-state algebra per connectivity class:
///  - strong balanced: c = p^T G x0, limit c * G 1; strong unbalanced: 0;
///  - quasi-strong, balanced leaders: leader rule on the leader block,
///    followers -L_F^{-1} L_FL G_L 1 c (the K = 1 case freezes the root and
///    uses its initial value); unbalanced leaders: 0;
///  - weak: per-CSC limits (balanced: gauge-weighted average; unbalanced: 0;
///    singleton: the initial value), followers combine through the varpi
///    columns.
/// Only meaningful for disturbance-free runs; the gauge-weighted average is
/// not conserved through a reaching phase.
PredictedLimit predicted_limits(const GraphAnalysis& analysis, const Eigen::VectorXd& x0);

/// Outcome of one property check; residual <= tol iff pass.
struct Verdict {
  std::string property;
  bool pass = false;
  double residual = 0.0;
  double tol = 0.0;
  double t_eval = 0.0;
  std::string details;
};

/// Hybrid default: 1e-3 * max(1, ||x0||_inf), so tiny initial states do not
/// produce vacuous passes.
double default_tolerance(const Eigen::VectorXd& x0);

/// max over samples t >= T of ||x(t)||_inf <= tol.
Verdict check_stability(const Trajectory& traj, double t_settle, double tol);

/// All |x_k(t)| equal to a common x* > tol for t >= T; x* is estimated as
/// the median of |x_k(T)|. An x* at or below tol is reported as degenerate
/// (stability holds instead).
Verdict check_bipartite_consensus(const Trajectory& traj, double t_settle, double tol);

/// Leaders pass the bipartite check with magnitude x_f; every follower
/// stays inside |x_l(t)| <= x_f + tol for t >= T. Quasi-strong graphs only.
Verdict check_interval_bipartite(const Trajectory& traj, const GraphAnalysis& analysis,
                                 double t_settle, double tol);

/// Balanced CSCs pass bipartite consensus (or are at zero), unbalanced CSCs
/// pass stability, and every follower stays inside the symmetric hull
/// max_k |x_k(t)| + tol of the leaders. Weakly connected graphs only.
Verdict check_bipartite_containment(const Trajectory& traj, const GraphAnalysis& analysis,
                                    double t_settle, double tol);

/// max over samples t >= T_r of ||sigma(t)||_inf <= tol + boundary_layer.
Verdict check_sliding_reach(const Trajectory& traj, double t_reach, double tol,
                            double boundary_layer);

/// v(t) <= phi(t)^-b * exp(-a t) * v(0) * (1 + slack) at every sample with
/// t < T - guard. Residual is the worst relative overshoot of the bound.
Verdict check_envelope(std::span<const double> t, std::span<const double> v, double a, double b,
                       const GainSchedule& sched, double slack);

}  // namespace cansim
