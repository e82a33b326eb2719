#include "cansim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace cansim {

const char* to_string(Mode m) { return m == Mode::kNominal ? "nominal" : "sliding"; }

double Scenario::settling_time() const {
  return mode == Mode::kNominal ? params.t1 : params.tr + params.ts;
}

void Scenario::validate() const {
  graph.validate();
  if (mode == Mode::kNominal)
    params.validate_nominal();
  else
    params.validate_sliding();
  if (x0.size() != graph.n) throw ValidationError("scenario: x0 must have one entry per node");
  if (mode == Mode::kSliding && sigma0.size() != graph.n)
    throw ValidationError("scenario: sliding runs require sigma0 with one entry per node");
  if (!(t_end > 0.0)) throw ValidationError("scenario: t_end must be > 0");
  if (!disable_protocol && t_end < settling_time() - 1e-12)
    throw ValidationError("scenario: t_end before settling time");
  if (!(h > 0.0)) throw ValidationError("scenario: h must be > 0");
  if (stride < 1) throw ValidationError("scenario: stride must be >= 1");
  if (disturbance) {
    if (static_cast<int>(disturbance->channels.size()) != graph.n)
      throw ValidationError("scenario: disturbance needs one channel per node");
    if (mode == Mode::kSliding && disturbance->bound() > params.delta + 1e-12)
      throw ValidationError("scenario: disturbance amplitude exceeds the declared bound delta");
  }
}

std::size_t Trajectory::index_at(double time) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(time));
  auto it = std::lower_bound(t.begin(), t.end(), time - tol);
  if (it == t.end() || std::abs(*it - time) > tol)
    throw ValidationError("trajectory: grid does not contain the requested time");
  return static_cast<std::size_t>(it - t.begin());
}

namespace {

struct Clock {
  double settle;
  double guard;
};

// Record grid: multiples of h*stride, the event times, and t_end. Clusters
// closer than a relative 1e-9 collapse onto the event value so that lookups
// at T_r / T hit exact samples.
std::vector<double> record_grid(const Scenario& scn, const std::vector<double>& events) {
  std::vector<std::pair<double, bool>> pts;  // (time, is_event)
  const double dt = scn.h * scn.stride;
  for (long k = 0; k * dt < scn.t_end; ++k) pts.emplace_back(k * dt, false);
  pts.emplace_back(scn.t_end, false);
  for (double e : events)
    if (e < scn.t_end + 1e-12) pts.emplace_back(std::min(e, scn.t_end), true);
  std::sort(pts.begin(), pts.end());

  std::vector<double> grid;
  for (std::size_t i = 0; i < pts.size();) {
    std::size_t j = i;
    double chosen = pts[i].first;
    const double tol = 1e-9 * std::max(1.0, std::abs(pts[i].first));
    while (j < pts.size() && pts[j].first - pts[i].first <= tol) {
      if (pts[j].second) chosen = pts[j].first;  // event value wins the cluster
      ++j;
    }
    grid.push_back(chosen);
    i = j;
  }
  return grid;
}

}  // namespace

Trajectory simulate(const Scenario& scn) {
  scn.validate();
  const int n = scn.graph.n;
  const bool sliding = scn.mode == Mode::kSliding;

  std::vector<Clock> clocks;
  std::vector<double> event_times;
  GainSchedule nominal_sched{};
  if (!scn.disable_protocol) {
    if (sliding) {
      nominal_sched = scn.params.sliding_nominal_schedule();
      const GainSchedule reach = scn.params.reaching_schedule();
      clocks.push_back({reach.settling_time, reach.guard});
      clocks.push_back({nominal_sched.settling_time, nominal_sched.guard});
      event_times = {reach.settling_time, nominal_sched.settling_time};
    } else {
      nominal_sched = scn.params.nominal_schedule();
      clocks.push_back({nominal_sched.settling_time, nominal_sched.guard});
      event_times = {nominal_sched.settling_time};
    }
  }

  const DisturbanceSpec dist =
      scn.disturbance ? *scn.disturbance : DisturbanceSpec::zero(n);

  Eigen::VectorXd x = scn.x0;
  Eigen::VectorXd vs =
      sliding ? Eigen::VectorXd(scn.sigma0 - scn.x0) : Eigen::VectorXd::Zero(0);

  // Control applied at (t, x, vs); also reports varsigma_dot.
  auto control = [&](double t, const Eigen::VectorXd& xs, const Eigen::VectorXd& vss,
                     Eigen::VectorXd& u, Eigen::VectorXd* vs_dot) {
    if (scn.disable_protocol) {
      u = Eigen::VectorXd::Zero(n);
      if (vs_dot) vs_dot->setZero(n);
      return;
    }
    if (sliding) {
      SlidingState state{vss};
      SlidingControl sc = sliding_control(xs, state, t, scn.graph, scn.params);
      u = std::move(sc.u);
      if (vs_dot) *vs_dot = std::move(sc.varsigma_dot);
    } else {
      u = nominal_control(xs, t, scn.graph, scn.params, nominal_sched);
      if (vs_dot) vs_dot->setZero(0);
    }
  };

  auto derivative = [&](double t, const Eigen::VectorXd& xs, const Eigen::VectorXd& vss,
                        Eigen::VectorXd& dx, Eigen::VectorXd& dvs) {
    Eigen::VectorXd u;
    control(t, xs, vss, u, sliding ? &dvs : nullptr);
    dx = u + disturbance(t, dist);
    if (!sliding) dvs.setZero(0);
  };

  const std::vector<double> grid = record_grid(scn, event_times);

  Trajectory traj;
  traj.t.reserve(grid.size());
  traj.x.resize(grid.size(), n);
  traj.sigma.resize(sliding ? grid.size() : 0, sliding ? n : 0);
  traj.u.resize(grid.size(), n);
  traj.d.resize(grid.size(), n);

  // Stiffness cap for the saturated sign term: keeps the explicit scheme
  // stable inside the boundary layer.
  double layer_cap = std::numeric_limits<double>::infinity();
  if (sliding && !scn.disable_protocol && scn.params.boundary_layer > 0.0)
    layer_cap = 0.8 / (scn.params.mu1 / scn.params.boundary_layer + scn.params.mu2);
  const bool exact_sign = sliding && !scn.disable_protocol && scn.params.boundary_layer == 0.0;
  const double crossing_floor = scn.h * 1e-2;

  Eigen::VectorXd k1x(n), k2x(n), k3x(n), k4x(n);
  Eigen::VectorXd k1v, k2v, k3v, k4v;

  double t = grid.front();
  std::size_t row = 0;
  auto record = [&](double time) {
    Eigen::VectorXd u;
    control(time, x, vs, u, nullptr);
    traj.t.push_back(time);
    traj.x.row(row) = x.transpose();
    if (sliding) traj.sigma.row(row) = (x + vs).transpose();
    traj.u.row(row) = u.transpose();
    traj.d.row(row) = disturbance(time, dist).transpose();
    ++row;
  };
  record(t);

  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double target = grid[g];
    while (t < target) {
      double h_eff = std::min(scn.h, layer_cap);
      for (const Clock& c : clocks)
        if (t < c.settle)
          h_eff = std::min(h_eff, std::max((c.settle - t) / 20.0, 0.5 * c.guard));
      if (exact_sign) {
        Eigen::VectorXd dx0, dvs0;
        derivative(t, x, vs, dx0, dvs0);
        const Eigen::VectorXd sigma = x + vs;
        const Eigen::VectorXd sigma_dot = dx0 + dvs0;
        double crossing = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k)
          if (std::abs(sigma_dot(k)) > 1e-300)
            crossing = std::min(crossing, std::abs(sigma(k)) / std::abs(sigma_dot(k)));
        h_eff = std::min(h_eff, std::max(crossing, crossing_floor));
      }
      const bool final_step = target - t <= h_eff * (1.0 + 1e-9);
      if (final_step) h_eff = target - t;

      // Classic RK4 on the joint (x, varsigma) state.
      derivative(t, x, vs, k1x, k1v);
      if (sliding) {
        derivative(t + 0.5 * h_eff, x + 0.5 * h_eff * k1x, vs + 0.5 * h_eff * k1v, k2x, k2v);
        derivative(t + 0.5 * h_eff, x + 0.5 * h_eff * k2x, vs + 0.5 * h_eff * k2v, k3x, k3v);
        derivative(t + h_eff, x + h_eff * k3x, vs + h_eff * k3v, k4x, k4v);
        vs += (h_eff / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      } else {
        Eigen::VectorXd unused;
        derivative(t + 0.5 * h_eff, x + 0.5 * h_eff * k1x, vs, k2x, unused);
        derivative(t + 0.5 * h_eff, x + 0.5 * h_eff * k2x, vs, k3x, unused);
        derivative(t + h_eff, x + h_eff * k3x, vs, k4x, unused);
      }
      x += (h_eff / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      t = final_step ? target : t + h_eff;

      if (!x.allFinite() || (sliding && !vs.allFinite())) {
        std::ostringstream os;
        os << "simulate: non-finite state at t = " << t
           << "; reduce the base step h or enlarge the gain guard";
        throw NumericalError(os.str());
      }
    }
    t = target;
    record(t);
  }

  for (std::size_t e = 0; e < event_times.size(); ++e) {
    if (event_times[e] > scn.t_end + 1e-12) continue;
    Trajectory::Event ev;
    ev.name = (sliding && e == 0) ? "reach" : "settle";
    ev.time = event_times[e];
    ev.index = static_cast<std::ptrdiff_t>(traj.index_at(event_times[e]));
    traj.events.push_back(ev);
  }
  return traj;
}

std::vector<BatchEntry> simulate_batch(const std::vector<Scenario>& scenarios, int jobs) {
  std::vector<BatchEntry> results(scenarios.size());
  auto run_one = [&](std::size_t i) {
    try {
      results[i].trajectory = simulate(scenarios[i]);
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

}  // namespace cansim
