#include "cansim/analysis.hpp"

namespace cansim {

bool GraphAnalysis::any_balanced_csc() const {
  for (const auto& csc : cscs)
    if (csc.balance.balanced) return true;
  return false;
}

GraphAnalysis analyze(const SignedDigraph& g, const AnalyzeOptions& options) {
  GraphAnalysis a;
  a.graph = g;
  a.graph.validate();
  a.laplacian = laplacian_bundle(g);
  a.partition = strong_components(g);
  a.connectivity = classify_connectivity(g, a.partition);
  a.whole_balance = structural_balance(g);
  a.blocks = laplacian_blocks(g, a.partition);

  std::vector<BalanceVerdict> csc_balances;
  for (int k = 0; k < a.partition.csc_count; ++k) {
    CscAnalysis csc;
    csc.nodes = a.partition.sccs[k];
    csc.balance = structural_balance(g, csc.nodes);
    csc_balances.push_back(csc.balance);

    const Eigen::MatrixXd& block = a.blocks.leader_blocks[k];
    csc.perron = left_positive_vector(block);
    if (csc.balance.balanced && block.rows() >= 2)
      csc.balance_gap = balance_gap(block, csc.balance.gauge, csc.perron);
    Eigen::EigenSolver<Eigen::MatrixXd> es(block, false);
    csc.eigenvalues = es.eigenvalues();
    if (options.with_stabilizers && !csc.balance.balanced)
      csc.stabilizer = diagonal_stabilizer(block, options.seed).diagonal;
    a.cscs.push_back(std::move(csc));
  }

  if (a.has_followers()) {
    a.weights = containment_weights(a.blocks, csc_balances);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a.blocks.follower_block, false);
    a.follower_eigenvalues = es.eigenvalues();
    if (options.with_stabilizers)
      a.follower_stabilizer = diagonal_stabilizer(a.blocks.follower_block, options.seed).diagonal;
  }
  return a;
}

}  // namespace cansim
