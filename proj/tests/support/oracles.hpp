#pragma once

// Test-only oracles. Each one recomputes its answer from first principles
// (exhaustive search, transitive closure, closed-form integrals) so the
// library paths they check cannot leak into the expected values.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "cansim/dynamics.hpp"
#include "cansim/signed_graph.hpp"

namespace cansim::testing {

/// Exhaustive gauge search: returns some diagonal +-1 vector g with
/// diag(g) L diag(g) equal entrywise to the comparison matrix of L.
inline std::optional<Eigen::VectorXd> brute_force_gauge(const Eigen::MatrixXd& laplacian,
                                                        double tol = 1e-12) {
  const int n = static_cast<int>(laplacian.rows());
  Eigen::MatrixXd comparison = -laplacian.cwiseAbs();
  comparison.diagonal() = laplacian.diagonal().cwiseAbs();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = ((mask >> i) & 1u) ? -1.0 : 1.0;
    Eigen::MatrixXd glg = g.asDiagonal() * laplacian * g.asDiagonal();
    if ((glg - comparison).cwiseAbs().maxCoeff() <= tol) return g;
  }
  return std::nullopt;
}

/// Floyd-Warshall transitive closure; reach[i][i] is true.
inline std::vector<std::vector<bool>> reachability(const SignedDigraph& g) {
  std::vector<std::vector<bool>> reach(g.n, std::vector<bool>(g.n, false));
  for (int i = 0; i < g.n; ++i) reach[i][i] = true;
  for (const Edge& e : g.edges) reach[e.from][e.to] = true;
  for (int k = 0; k < g.n; ++k)
    for (int i = 0; i < g.n; ++i)
      if (reach[i][k])
        for (int j = 0; j < g.n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

/// SCCs by mutual reachability, as unordered node sets.
inline std::vector<std::vector<int>> sccs_by_reachability(const SignedDigraph& g) {
  auto reach = reachability(g);
  std::vector<bool> assigned(g.n, false);
  std::vector<std::vector<int>> sccs;
  for (int i = 0; i < g.n; ++i) {
    if (assigned[i]) continue;
    std::vector<int> scc;
    for (int j = 0; j < g.n; ++j)
      if (reach[i][j] && reach[j][i]) {
        scc.push_back(j);
        assigned[j] = true;
      }
    sccs.push_back(scc);
  }
  return sccs;
}

/// Closed iff no edge enters the component from outside.
inline bool component_closed(const SignedDigraph& g, const std::vector<int>& scc) {
  std::vector<bool> inside(g.n, false);
  for (int v : scc) inside[v] = true;
  for (const Edge& e : g.edges)
    if (inside[e.to] && !inside[e.from]) return false;
  return true;
}

inline bool strongly_connected_by_reachability(const SignedDigraph& g) {
  auto reach = reachability(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (!reach[i][j]) return false;
  return true;
}

/// Some node reaches all others.
inline bool has_root_by_reachability(const SignedDigraph& g) {
  auto reach = reachability(g);
  for (int i = 0; i < g.n; ++i) {
    bool root = true;
    for (int j = 0; j < g.n && root; ++j) root = reach[i][j];
    if (root) return true;
  }
  return false;
}

inline bool undirected_connected(const SignedDigraph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (const Edge& e : g.edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<bool> seen(g.n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.n;
}

inline Connectivity connectivity_by_reachability(const SignedDigraph& g) {
  if (strongly_connected_by_reachability(g)) return Connectivity::kStrong;
  if (has_root_by_reachability(g)) return Connectivity::kQuasiStrong;
  if (undirected_connected(g)) return Connectivity::kWeak;
  return Connectivity::kDisconnected;
}

/// Closed-form integral of one disturbance channel from 0 to t.
inline double disturbance_integral(const DisturbanceChannel& c, double t) {
  switch (c.kind) {
    case Waveform::kZero: return 0.0;
    case Waveform::kConstant: return c.amplitude * t;
    case Waveform::kSin:
      if (c.omega == 0.0) return c.amplitude * std::sin(c.phase) * t;
      return c.amplitude * (std::cos(c.phase) - std::cos(c.omega * t + c.phase)) / c.omega;
    case Waveform::kCos:
      if (c.omega == 0.0) return c.amplitude * std::cos(c.phase) * t;
      return c.amplitude * (std::sin(c.omega * t + c.phase) - std::sin(c.phase)) / c.omega;
  }
  return 0.0;
}

}  // namespace cansim::testing
