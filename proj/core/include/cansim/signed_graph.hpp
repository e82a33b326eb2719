#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "cansim/errors.hpp"

namespace cansim {

/// One weighted directed edge v_from -> v_to. Weights may be negative
/// (antagonistic coupling) but never zero. Node indices are 0-based in
/// memory; the JSON interchange format is 1-based.
struct Edge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

/// Weighted signed digraph without self-loops and with at most one edge per
/// ordered node pair.
///
/// Orientation convention: an edge {from = l, to = k, w} populates adjacency
/// entry W(k, l). Rows index the *receiver*, so the in-neighborhood of node k
/// is {l : W(k, l) != 0}. This is easy to flip by accident; everything in
/// this library (Laplacian, neighborhood errors, block splits) assumes the
/// row-is-receiver orientation.
struct SignedDigraph {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::string> labels;  // optional; empty or exactly n entries

  /// W with W(to, from) = weight.
  Eigen::MatrixXd adjacency() const;

  /// L = D - W with D_k the sum of |W(k, l)| over in-neighbors l.
  Eigen::MatrixXd laplacian() const;

  /// Throws ValidationError naming the offending edge on self-loops, zero
  /// weights, duplicate ordered pairs, or out-of-range indices.
  void validate() const;
};

/// Parses the graph JSON document {"n": int, "edges": [{"from", "to", "w"}],
/// "labels": [...]?} with 1-based node indices. Validates on the way in.
SignedDigraph parse_graph(const std::string& json_text);

/// Inverse of parse_graph (1-based indices in the output).
std::string graph_to_json(const SignedDigraph& g);

/// m_ii = |a_ii|, m_ij = -|a_ij| for i != j.
Eigen::MatrixXd comparison_matrix(const Eigen::MatrixXd& a);

struct LaplacianBundle {
  Eigen::MatrixXd laplacian;   // L = D - W
  Eigen::MatrixXd comparison;  // M(L); rows sum to zero exactly
  Eigen::VectorXd degrees;     // D_k
};

LaplacianBundle laplacian_bundle(const SignedDigraph& g);

/// Strongly connected components with closure flags and the induced
/// leader/follower split. SCCs are listed in topological order of the
/// condensation (sources first); ties at equal depth break on the smallest
/// original node index, and nodes inside each SCC are ascending. The closed
/// SCCs (no incoming edge from outside) are exactly the leading csc_count
/// entries.
struct ComponentPartition {
  std::vector<std::vector<int>> sccs;
  std::vector<bool> closed;
  std::vector<int> leaders;    // nodes of closed SCCs, ascending
  std::vector<int> followers;  // remaining nodes, ascending
  std::vector<int> csc_sizes;  // N_1..N_m
  int csc_count = 0;           // m
  int leader_count = 0;        // K
};

ComponentPartition strong_components(const SignedDigraph& g);

enum class Connectivity { kStrong, kQuasiStrong, kWeak, kDisconnected };

const char* to_string(Connectivity c);

/// Mutually exclusive classes ordered by strength: Strong (one SCC),
/// QuasiStrong (a root reaches every node), Weak (underlying undirected
/// graph connected), Disconnected.
Connectivity classify_connectivity(const SignedDigraph& g);
Connectivity classify_connectivity(const SignedDigraph& g, const ComponentPartition& p);

/// Result of the gauge search. When balanced, `gauge` holds +-1 entries
/// aligned with the tested node list and the lowest-index node of every
/// connected piece is fixed to +1. When unbalanced, `witness` holds a
/// contradiction cycle as a list of graph edges.
struct BalanceVerdict {
  bool balanced = false;
  Eigen::VectorXd gauge;
  std::vector<Edge> witness;
};

/// Structural balance of the whole graph, or of the subgraph induced by
/// `nodes`. Every directed edge contributes one sign constraint
/// g_to * g_from = sign(w); antiparallel edges with opposite signs are legal
/// inputs and simply contradict each other.
BalanceVerdict structural_balance(const SignedDigraph& g);
BalanceVerdict structural_balance(const SignedDigraph& g, std::span<const int> nodes);

/// Leader-first permutation of L. The permuted matrix has the block shape
///   [ L_L   0  ]
///   [ L_FL  L_F]
/// with L_L block-diagonal across the closed SCCs.
struct LaplacianBlocks {
  std::vector<int> permutation;  // permutation[i] = original node at slot i
  int leader_count = 0;          // K
  std::vector<int> csc_sizes;
  Eigen::MatrixXd permuted;        // full N x N permuted Laplacian
  Eigen::MatrixXd leader_block;    // K x K
  Eigen::MatrixXd follower_block;  // (N-K) x (N-K)
  Eigen::MatrixXd cross_block;     // (N-K) x K
  std::vector<Eigen::MatrixXd> leader_blocks;  // per-CSC diagonal blocks
  std::vector<Eigen::MatrixXd> cross_blocks;   // per-CSC column strips of L_FL
};

LaplacianBlocks laplacian_blocks(const SignedDigraph& g, const ComponentPartition& p);

}  // namespace cansim
