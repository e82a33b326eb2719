#include "cansim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace cansim {

namespace {

double sign_of(double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); }

void check_base_gains(const ProtocolParams& p) {
  if (!(p.rho1 > 0.0)) throw ValidationError("params: rho1 must be > 0");
  if (!(p.rho2 > 0.0)) throw ValidationError("params: rho2 must be > 0");
  if (!(p.kappa > 0.0)) throw ValidationError("params: kappa must be > 0");
  if (!(p.guard_factor > 0.0) || !(p.guard_factor < 1.0))
    throw ValidationError("params: guard_factor must lie in (0, 1)");
}

}  // namespace

void ProtocolParams::validate_nominal() const {
  check_base_gains(*this);
  if (!(t1 > 0.0)) throw ValidationError("params: T1 must be > 0 for nominal runs");
}

void ProtocolParams::validate_sliding() const {
  check_base_gains(*this);
  if (!(tr > 0.0)) throw ValidationError("params: Tr must be > 0 for sliding runs");
  if (!(ts > 0.0)) throw ValidationError("params: Ts must be > 0 for sliding runs");
  if (!(mu1 > 0.0) || !(mu2 > 0.0) || !(mu3 > 0.0))
    throw ValidationError("params: mu1, mu2, mu3 must be > 0 for sliding runs");
  if (delta < 0.0) throw ValidationError("params: delta must be >= 0");
  if (!(mu1 > delta)) throw ValidationError("params: mu1 must exceed the disturbance bound delta");
  if (boundary_layer < 0.0) throw ValidationError("params: boundary_layer must be >= 0");
}

GainSchedule ProtocolParams::nominal_schedule() const {
  return GainSchedule::make(t1, kappa, guard_factor);
}

GainSchedule ProtocolParams::sliding_nominal_schedule() const {
  return GainSchedule::make(tr + ts, kappa, guard_factor);
}

GainSchedule ProtocolParams::reaching_schedule() const {
  return GainSchedule::make(tr, kappa, guard_factor);
}

double DisturbanceSpec::bound() const {
  double b = 0.0;
  for (const auto& c : channels) b = std::max(b, std::abs(c.amplitude));
  return b;
}

DisturbanceSpec DisturbanceSpec::zero(int n) {
  DisturbanceSpec spec;
  spec.channels.assign(static_cast<std::size_t>(n), DisturbanceChannel{});
  return spec;
}

DisturbanceSpec DisturbanceSpec::uniform(int n, Waveform kind, double amplitude, double omega_base,
                                         double omega_per_index, double phase) {
  DisturbanceSpec spec;
  for (int k = 0; k < n; ++k)
    spec.channels.push_back({kind, amplitude, omega_base + omega_per_index * (k + 1), phase});
  return spec;
}

Eigen::VectorXd disturbance(double t, const DisturbanceSpec& spec) {
  Eigen::VectorXd d(spec.channels.size());
  for (std::size_t k = 0; k < spec.channels.size(); ++k) {
    const auto& c = spec.channels[k];
    switch (c.kind) {
      case Waveform::kZero: d(k) = 0.0; break;
      case Waveform::kConstant: d(k) = c.amplitude; break;
      case Waveform::kSin: d(k) = c.amplitude * std::sin(c.omega * t + c.phase); break;
      case Waveform::kCos: d(k) = c.amplitude * std::cos(c.omega * t + c.phase); break;
    }
  }
  return d;
}

Eigen::VectorXd neighborhood_error(const Eigen::VectorXd& x, const SignedDigraph& g) {
  if (x.size() != g.n) throw ValidationError("neighborhood_error: state dimension mismatch");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(g.n);
  for (const Edge& edge : g.edges)
    e(edge.to) += edge.weight * (x(edge.from) - sign_of(edge.weight) * x(edge.to));
  return e;
}

Eigen::VectorXd nominal_control(const Eigen::VectorXd& x, double t, const SignedDigraph& g,
                                const ProtocolParams& params, const GainSchedule& sched) {
  const double factor = params.rho1 + params.rho2 * gain_ratio(t, sched);
  return factor * neighborhood_error(x, g);
}

SlidingControl sliding_control(const Eigen::VectorXd& x, const SlidingState& state, double t,
                               const SignedDigraph& g, const ProtocolParams& params) {
  if (state.varsigma.size() != x.size())
    throw ValidationError("sliding_control: varsigma dimension mismatch");

  SlidingControl out;
  out.u_nominal = nominal_control(x, t, g, params, params.sliding_nominal_schedule());

  const Eigen::VectorXd sigma = state.sigma(x);
  const double rate = params.mu2 + params.mu3 * gain_ratio(t, params.reaching_schedule());
  out.u_rejection.resize(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    double sgn;
    if (params.boundary_layer > 0.0)
      sgn = std::clamp(sigma(k) / params.boundary_layer, -1.0, 1.0);
    else
      sgn = sign_of(sigma(k));
    out.u_rejection(k) = -params.mu1 * sgn - rate * sigma(k);
  }
  out.u = out.u_rejection + out.u_nominal;
  out.varsigma_dot = -out.u_nominal;
  return out;
}

}  // namespace cansim
