#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cansim/gain.hpp"
#include "cansim/signed_graph.hpp"

namespace cansim {

/// Control gains for the nominal and the disturbance-rejecting protocols.
///
/// The two protocols run different gain clocks: the nominal component of a
/// sliding run uses T = tr + ts while the rejection component uses T = tr.
/// Conflating the two clocks is the easiest bug to write here, which is why
/// the schedules are only available through the named accessors below.
struct ProtocolParams {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double kappa = 0.0;
  double t1 = 0.0;  // nominal settling time
  double tr = 0.0;  // reaching time (sliding)
  double ts = 0.0;  // post-reach budget (sliding)
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double delta = 0.0;           // disturbance bound
  double boundary_layer = 1e-4; // 0 selects the exact sign term
  double guard_factor = kDefaultGuardFactor;

  void validate_nominal() const;
  void validate_sliding() const;

  GainSchedule nominal_schedule() const;          // T = t1
  GainSchedule sliding_nominal_schedule() const;  // T = tr + ts
  GainSchedule reaching_schedule() const;         // T = tr
};

enum class Waveform { kZero, kConstant, kSin, kCos };

struct DisturbanceChannel {
  Waveform kind = Waveform::kZero;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
};

/// Per-agent disturbance waveforms. sup_t |d_k(t)| = |amplitude_k|.
struct DisturbanceSpec {
  std::vector<DisturbanceChannel> channels;

  double bound() const;

  static DisturbanceSpec zero(int n);
  /// Channel k (0-based) gets omega = omega_base + omega_per_index * (k+1),
  /// covering waveforms whose frequency scales with the 1-based agent index.
  static DisturbanceSpec uniform(int n, Waveform kind, double amplitude, double omega_base,
                                 double omega_per_index, double phase);
};

Eigen::VectorXd disturbance(double t, const DisturbanceSpec& spec);

/// Auxiliary integrator state of the sliding design; sigma = x + varsigma.
struct SlidingState {
  Eigen::VectorXd varsigma;
  Eigen::VectorXd sigma(const Eigen::VectorXd& x) const { return x + varsigma; }
};

/// e_k = sum over in-neighbors l of w_kl (x_l - sign(w_kl) x_k); equals -L x.
Eigen::VectorXd neighborhood_error(const Eigen::VectorXd& x, const SignedDigraph& g);

/// u = (rho1 + rho2 * phidot/phi) * e with the given gain schedule.
Eigen::VectorXd nominal_control(const Eigen::VectorXd& x, double t, const SignedDigraph& g,
                                const ProtocolParams& params, const GainSchedule& sched);

struct SlidingControl {
  Eigen::VectorXd u;             // u_dis + u_nom
  Eigen::VectorXd varsigma_dot;  // -u_nom
  Eigen::VectorXd u_nominal;
  Eigen::VectorXd u_rejection;
};

/// Sliding-mode protocol: u_dis = -mu1 sgn(sigma) - (mu2 + mu3 phidot/phi)
/// sigma on the reaching clock, added to the nominal protocol on the
/// combined clock. With boundary_layer > 0 the sign term is the linear
/// saturation sigma / boundary_layer clipped to [-1, 1]; sign(0) = 0.
SlidingControl sliding_control(const Eigen::VectorXd& x, const SlidingState& state, double t,
                               const SignedDigraph& g, const ProtocolParams& params);

}  // namespace cansim
