#include <doctest.h>

#include "cansim/signed_graph.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace cansim;
using namespace cansim::testing;

namespace {

SignedDigraph make(int n, std::initializer_list<Edge> edges) {
  SignedDigraph g;
  g.n = n;
  g.edges = edges;
  return g;
}

int rank_of(Connectivity c) {
  switch (c) {
    case Connectivity::kDisconnected: return 0;
    case Connectivity::kWeak: return 1;
    case Connectivity::kQuasiStrong: return 2;
    case Connectivity::kStrong: return 3;
  }
  return -1;
}

}  // namespace

TEST_CASE("parse_graph accepts the mutual-negative pair and builds W row-receiver") {
  const std::string doc = R"({"n": 2, "edges": [
    {"from": 1, "to": 2, "w": -1}, {"from": 2, "to": 1, "w": -1}]})";
  SignedDigraph g = parse_graph(doc);
  Eigen::MatrixXd w = g.adjacency();
  CHECK(w(0, 0) == 0.0);
  CHECK(w(0, 1) == -1.0);
  CHECK(w(1, 0) == -1.0);
  CHECK(w(1, 1) == 0.0);
}

TEST_CASE("parse_graph rejects bad edges with the offender named") {
  CHECK_THROWS_WITH_AS(parse_graph(R"({"n": 2, "edges": [{"from": 1, "to": 1, "w": 1}]})"),
                       doctest::Contains("self-loop"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph(R"({"n": 2, "edges": [{"from": 1, "to": 2, "w": 0}]})"),
                       doctest::Contains("zero weight"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph(R"({"n": 2, "edges": [
      {"from": 1, "to": 2, "w": 1}, {"from": 1, "to": 2, "w": 2}]})"),
                       doctest::Contains("duplicate"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_graph(R"({"n": 2, "edges": [{"from": 1, "to": 3, "w": 1}]})"),
                       doctest::Contains("out of range"), ValidationError);
  CHECK_THROWS_AS(parse_graph("{ not json"), ParseError);
}

TEST_CASE("comparison matrix definition") {
  Eigen::MatrixXd a(2, 2);
  a << 2, -1, 3, 1;
  Eigen::MatrixXd m = comparison_matrix(a);
  Eigen::MatrixXd expected(2, 2);
  expected << 2, -1, -3, 1;
  CHECK((m - expected).cwiseAbs().maxCoeff() == 0.0);

  CHECK((comparison_matrix(Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  SignedDigraph g = make(2, {{0, 1, -1.0}, {1, 0, -1.0}});
  Eigen::MatrixXd l = g.laplacian();
  Eigen::MatrixXd lm(2, 2);
  lm << 1, 1, 1, 1;
  CHECK((l - lm).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd cm(2, 2);
  cm << 1, -1, -1, 1;
  CHECK((comparison_matrix(l) - cm).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Laplacian bundle: L = D - W and exact zero comparison row sums") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    SignedDigraph g = random_digraph(rng, 2 + trial % 6, 0.5);
    LaplacianBundle b = laplacian_bundle(g);
    CHECK((b.laplacian - (Eigen::MatrixXd(b.degrees.asDiagonal()) - g.adjacency()))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((b.comparison * Eigen::VectorXd::Ones(g.n)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("strong components: cycle, path, and the two-CSC sink instance") {
  SignedDigraph cycle = make(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
  ComponentPartition p = strong_components(cycle);
  CHECK(p.sccs.size() == 1);
  CHECK(p.closed[0]);
  CHECK(p.leader_count == 3);
  CHECK(p.csc_count == 1);

  SignedDigraph path = make(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  p = strong_components(path);
  CHECK(p.sccs.size() == 3);
  CHECK(p.closed[0]);
  CHECK_FALSE(p.closed[1]);
  CHECK_FALSE(p.closed[2]);
  CHECK(p.leaders == std::vector<int>{0});

  // Two disjoint 2-cycles feeding a sink; expected structure derived from
  // the reachability oracle.
  SignedDigraph two = make(5, {{0, 1, 1.0},
                               {1, 0, -1.0},
                               {2, 3, 1.0},
                               {3, 2, 1.0},
                               {1, 4, 2.0},
                               {3, 4, -1.0}});
  p = strong_components(two);
  CHECK(p.csc_count == 2);
  CHECK(p.leader_count == 4);
  CHECK(p.followers == std::vector<int>{4});

  auto oracle_sccs = sccs_by_reachability(two);
  CHECK(oracle_sccs.size() == p.sccs.size());
  for (const auto& scc : p.sccs) {
    bool found = false;
    for (auto oracle : oracle_sccs) {
      std::sort(oracle.begin(), oracle.end());
      found |= oracle == scc;
    }
    CHECK(found);
    // closed flag matches the oracle definition
    auto it = std::find(p.sccs.begin(), p.sccs.end(), scc);
    CHECK(p.closed[static_cast<std::size_t>(it - p.sccs.begin())] == component_closed(two, scc));
  }
}

TEST_CASE("SCC topological order puts sources first and is deterministic") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    SignedDigraph g = random_digraph(rng, 2 + trial % 7, 0.3);
    ComponentPartition p = strong_components(g);
    // every closed SCC precedes every non-closed one
    bool seen_open = false;
    for (bool closed : p.closed) {
      if (!closed) seen_open = true;
      if (closed) CHECK_FALSE(seen_open);
    }
    // no SCC may have an edge to an earlier SCC (topological order)
    std::vector<int> rank(g.n);
    for (std::size_t i = 0; i < p.sccs.size(); ++i)
      for (int v : p.sccs[i]) rank[v] = static_cast<int>(i);
    for (const Edge& e : g.edges) CHECK(rank[e.from] <= rank[e.to]);
  }
}

TEST_CASE("connectivity classification: named examples and oracle sweep") {
  CHECK(classify_connectivity(make(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}})) ==
        Connectivity::kStrong);
  CHECK(classify_connectivity(make(3, {{0, 1, 1.0}, {1, 2, 1.0}})) == Connectivity::kQuasiStrong);
  SignedDigraph vee = make(3, {{0, 2, 1.0}, {1, 2, 1.0}});
  CHECK(connectivity_by_reachability(vee) == Connectivity::kWeak);
  CHECK(classify_connectivity(vee) == Connectivity::kWeak);

  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    SignedDigraph g = random_digraph(rng, 2 + trial % 6, 0.35);
    CHECK(classify_connectivity(g) == connectivity_by_reachability(g));
  }
}

TEST_CASE("adding edges never lowers the connectivity class") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + trial % 3;
    SignedDigraph g;
    g.n = n;
    int last = rank_of(classify_connectivity(g));
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) pairs.emplace_back(a, b);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (auto [a, b] : pairs) {
      g.edges.push_back({a, b, std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0});
      int now = rank_of(classify_connectivity(g));
      CHECK(now >= last);
      last = now;
    }
    CHECK(last == rank_of(Connectivity::kStrong));
  }
}

TEST_CASE("structural balance: canonical instances") {
  SignedDigraph triangle = make(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
  BalanceVerdict v = structural_balance(triangle);
  REQUIRE(v.balanced);
  CHECK(v.gauge.isApprox(Eigen::VectorXd::Ones(3)));

  SignedDigraph pair = make(2, {{0, 1, -1.0}, {1, 0, -1.0}});
  v = structural_balance(pair);
  REQUIRE(v.balanced);
  CHECK(v.gauge(0) == 1.0);
  CHECK(v.gauge(1) == -1.0);

  SignedDigraph frustrated = make(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, -1.0}});
  v = structural_balance(frustrated);
  CHECK_FALSE(v.balanced);
  CHECK_FALSE(v.witness.empty());
  CHECK_FALSE(brute_force_gauge(frustrated.laplacian()).has_value());

  CHECK_THROWS_AS(structural_balance(triangle, std::span<const int>{}), ValidationError);
}

TEST_CASE("structural balance agrees with the exhaustive gauge oracle (N <= 5)") {
  Rng rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    SignedDigraph g = random_digraph(rng, 2 + trial % 4, 0.5);
    BalanceVerdict v = structural_balance(g);
    auto oracle = brute_force_gauge(g.laplacian());
    CHECK(v.balanced == oracle.has_value());
    if (v.balanced) {
      Eigen::MatrixXd l = g.laplacian();
      Eigen::MatrixXd glg = v.gauge.asDiagonal() * l * v.gauge.asDiagonal();
      CHECK((glg - comparison_matrix(l)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("sign-asymmetric antiparallel edges contradict as independent constraints") {
  SignedDigraph g = make(2, {{0, 1, 1.0}, {1, 0, -1.0}});
  BalanceVerdict v = structural_balance(g);
  CHECK_FALSE(v.balanced);
  CHECK(v.witness.size() >= 1);
}

TEST_CASE("gauge tie-break fixes the lowest node of every component to +1") {
  // two separate negative pairs
  SignedDigraph g = make(4, {{0, 1, -1.0}, {2, 3, -2.0}});
  BalanceVerdict v = structural_balance(g);
  REQUIRE(v.balanced);
  CHECK(v.gauge(0) == 1.0);
  CHECK(v.gauge(1) == -1.0);
  CHECK(v.gauge(2) == 1.0);
  CHECK(v.gauge(3) == -1.0);
}

TEST_CASE("every subgraph of a balanced graph is balanced") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    SignedDigraph g = random_balanced_strong(rng, 4 + trial % 4, 0.6);
    REQUIRE(structural_balance(g).balanced);
    std::vector<int> nodes;
    for (int v = 0; v < g.n; ++v)
      if (std::bernoulli_distribution(0.6)(rng)) nodes.push_back(v);
    if (nodes.empty()) nodes.push_back(0);
    CHECK(structural_balance(g, nodes).balanced);
  }
}

TEST_CASE("single-node subsets are balanced with gauge +1") {
  SignedDigraph g = make(3, {{0, 1, 1.0}, {1, 2, -1.0}});
  std::vector<int> one{2};
  BalanceVerdict v = structural_balance(g, one);
  REQUIRE(v.balanced);
  CHECK(v.gauge.size() == 1);
  CHECK(v.gauge(0) == 1.0);
}

TEST_CASE("laplacian blocks: strong graph has empty follower block") {
  SignedDigraph g = make(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
  LaplacianBlocks b = laplacian_blocks(g, strong_components(g));
  CHECK(b.leader_count == 3);
  CHECK(b.follower_block.rows() == 0);
  CHECK((b.leader_block - g.laplacian()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian blocks: two-node path splits as expected") {
  SignedDigraph g = make(2, {{0, 1, 1.0}});
  LaplacianBlocks b = laplacian_blocks(g, strong_components(g));
  CHECK(b.leader_count == 1);
  CHECK(b.leader_block(0, 0) == 0.0);
  CHECK(b.cross_block(0, 0) == -1.0);
  CHECK(b.follower_block(0, 0) == 1.0);
}

TEST_CASE("laplacian blocks reassemble the permuted Laplacian exactly") {
  Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    SignedDigraph g;
    switch (trial % 3) {
      case 0: g = random_quasi_strong(rng, 2 + trial % 3, 3, true); break;
      case 1: g = random_weak(rng, {2, 2}, {true, false}, 3); break;
      default: g = random_digraph(rng, 6, 0.4); break;
    }
    ComponentPartition p = strong_components(g);
    LaplacianBlocks b = laplacian_blocks(g, p);
    Eigen::MatrixXd l = g.laplacian();
    const int n = g.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(b.permuted(i, j) == l(b.permutation[i], b.permutation[j]));
    const int k = b.leader_count;
    if (k < n) CHECK(b.permuted.topRightCorner(k, n - k).cwiseAbs().maxCoeff() == 0.0);
    // per-CSC diagonal blocks equal the induced subgraph Laplacians
    int offset = 0;
    for (std::size_t c = 0; c < b.csc_sizes.size(); ++c) {
      Eigen::MatrixXd induced(b.csc_sizes[c], b.csc_sizes[c]);
      for (int i = 0; i < b.csc_sizes[c]; ++i)
        for (int j = 0; j < b.csc_sizes[c]; ++j)
          induced(i, j) = l(b.permutation[offset + i], b.permutation[offset + j]);
      CHECK((b.leader_blocks[c] - induced).cwiseAbs().maxCoeff() == 0.0);
      offset += b.csc_sizes[c];
    }
  }
}
