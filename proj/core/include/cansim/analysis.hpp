#pragma once

#include <optional>
#include <vector>

#include "cansim/spectral.hpp"

namespace cansim {

/// Everything the verdict oracle and the report writer need about one
/// closed strong component.
struct CscAnalysis {
  std::vector<int> nodes;  // original indices, ascending
  BalanceVerdict balance;
  PerronData perron;
  double balance_gap = 0.0;  // a(L_Lk); balanced components with >= 2 nodes
  Eigen::VectorXcd eigenvalues;
  std::optional<Eigen::VectorXd> stabilizer;  // unbalanced CSCs, on request
};

struct AnalyzeOptions {
  bool with_stabilizers = false;
  unsigned seed = 0;
};

/// Full graph-analysis bundle: connectivity class, partition, Laplacian
/// blocks, per-CSC balance/Perron data, and follower combination weights.
struct GraphAnalysis {
  SignedDigraph graph;
  LaplacianBundle laplacian;
  ComponentPartition partition;
  Connectivity connectivity = Connectivity::kDisconnected;
  BalanceVerdict whole_balance;
  LaplacianBlocks blocks;
  std::vector<CscAnalysis> cscs;
  std::optional<ContainmentWeights> weights;  // present when followers exist
  Eigen::VectorXcd follower_eigenvalues;
  std::optional<Eigen::VectorXd> follower_stabilizer;  // on request

  bool has_followers() const { return partition.leader_count < graph.n; }
  bool any_balanced_csc() const;
};

GraphAnalysis analyze(const SignedDigraph& g, const AnalyzeOptions& options = {});

}  // namespace cansim
