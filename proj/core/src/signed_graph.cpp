#include "cansim/signed_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace cansim {

namespace {

using nlohmann::json;

std::string edge_str(const Edge& e) {
  std::ostringstream os;
  os << "(" << e.from + 1 << " -> " << e.to + 1 << ", w = " << e.weight << ")";
  return os.str();
}

int sign_of(double w) { return (w > 0.0) - (w < 0.0); }

}  // namespace

void SignedDigraph::validate() const {
  if (n < 1) throw ValidationError("graph: n must be a positive integer");
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw ValidationError("graph: labels must be empty or have exactly n entries");
  std::unordered_set<long long> seen;
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw ValidationError("graph edge " + edge_str(e) + ": index out of range");
    if (e.from == e.to)
      throw ValidationError("graph edge " + edge_str(e) + ": self-loop");
    if (e.weight == 0.0)
      throw ValidationError("graph edge " + edge_str(e) + ": zero weight");
    if (!std::isfinite(e.weight))
      throw ValidationError("graph edge " + edge_str(e) + ": non-finite weight");
    long long key = static_cast<long long>(e.from) * n + e.to;
    if (!seen.insert(key).second)
      throw ValidationError("graph edge " + edge_str(e) + ": duplicate ordered edge");
  }
}

Eigen::MatrixXd SignedDigraph::adjacency() const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) w(e.to, e.from) = e.weight;
  return w;
}

Eigen::MatrixXd SignedDigraph::laplacian() const { return laplacian_bundle(*this).laplacian; }

SignedDigraph parse_graph(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("graph JSON: ") + err.what());
  }
  try {
    if (!doc.is_object()) throw ValidationError("graph JSON: top-level value must be an object");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
      throw ValidationError("graph JSON: field \"n\" (integer) is required");

    SignedDigraph g;
    g.n = doc["n"].get<int>();
    if (doc.contains("edges")) {
      if (!doc["edges"].is_array())
        throw ValidationError("graph JSON: \"edges\" must be an array");
      for (const auto& item : doc["edges"]) {
        if (!item.is_object() || !item.contains("from") || !item.contains("to") ||
            !item.contains("w"))
          throw ValidationError("graph JSON: each edge needs \"from\", \"to\", and \"w\"");
        Edge e;
        e.from = item["from"].get<int>() - 1;
        e.to = item["to"].get<int>() - 1;
        e.weight = item["w"].get<double>();
        g.edges.push_back(e);
      }
    }
    if (doc.contains("labels")) {
      if (!doc["labels"].is_array())
        throw ValidationError("graph JSON: \"labels\" must be an array");
      for (const auto& item : doc["labels"]) g.labels.push_back(item.get<std::string>());
    }
    g.validate();
    return g;
  } catch (const json::exception& err) {
    throw ValidationError(std::string("graph JSON: ") + err.what());
  }
}

std::string graph_to_json(const SignedDigraph& g) {
  json doc;
  doc["n"] = g.n;
  doc["edges"] = json::array();
  for (const Edge& e : g.edges)
    doc["edges"].push_back({{"from", e.from + 1}, {"to", e.to + 1}, {"w", e.weight}});
  if (!g.labels.empty()) doc["labels"] = g.labels;
  return doc.dump(2);
}

Eigen::MatrixXd comparison_matrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ValidationError("comparison_matrix: matrix must be square");
  Eigen::MatrixXd m = -a.cwiseAbs();
  m.diagonal() = a.diagonal().cwiseAbs();
  return m;
}

LaplacianBundle laplacian_bundle(const SignedDigraph& g) {
  LaplacianBundle b;
  Eigen::MatrixXd w = g.adjacency();
  b.degrees = Eigen::VectorXd::Zero(g.n);
  // Row sums of |W| accumulated in column order so that M(L) 1 = 0 holds
  // exactly, not just to rounding.
  for (int k = 0; k < g.n; ++k)
    for (int l = 0; l < g.n; ++l) b.degrees(k) += std::abs(w(k, l));
  b.laplacian = -w;
  b.laplacian.diagonal() += b.degrees;
  b.comparison = -w.cwiseAbs();
  b.comparison.diagonal() += b.degrees;
  return b;
}

namespace {

std::vector<std::vector<int>> successors(const SignedDigraph& g) {
  std::vector<std::vector<int>> succ(g.n);
  for (const Edge& e : g.edges) succ[e.from].push_back(e.to);
  return succ;
}

}  // namespace

ComponentPartition strong_components(const SignedDigraph& g) {
  g.validate();
  auto succ = successors(g);

  // Tarjan's algorithm; the explicit cut index is captured before the
  // per-node stack indices are cleared.
  std::vector<std::vector<int>> raw;
  {
    std::vector<int> dfs_number(g.n, -1), low(g.n, -1), stack_index(g.n, -1), stack;
    int counter = 0;
    auto visit = [&](auto&& self, int v) -> void {
      dfs_number[v] = low[v] = counter++;
      stack_index[v] = static_cast<int>(stack.size());
      stack.push_back(v);
      for (int w : succ[v]) {
        if (dfs_number[w] == -1) {
          self(self, w);
          low[v] = std::min(low[v], low[w]);
        } else if (dfs_number[w] < dfs_number[v] && stack_index[w] != -1) {
          low[v] = std::min(low[v], dfs_number[w]);
        }
      }
      if (low[v] == dfs_number[v]) {
        int cut = stack_index[v];
        std::vector<int> scc(stack.begin() + cut, stack.end());
        for (int w : scc) stack_index[w] = -1;
        stack.resize(static_cast<std::size_t>(cut));
        raw.push_back(std::move(scc));
      }
    };
    for (int v = 0; v < g.n; ++v)
      if (dfs_number[v] == -1) visit(visit, v);
  }

  int m = static_cast<int>(raw.size());
  std::vector<int> scc_of(g.n, -1);
  for (int i = 0; i < m; ++i)
    for (int v : raw[i]) scc_of[v] = i;

  // Condensation in-degrees and edges for the depth ranking.
  std::vector<std::unordered_set<int>> cond_succ(m);
  std::vector<int> in_degree(m, 0);
  for (const Edge& e : g.edges) {
    int a = scc_of[e.from], b = scc_of[e.to];
    if (a != b && cond_succ[a].insert(b).second) ++in_degree[b];
  }

  // Kahn levels: depth 0 are exactly the closed SCCs.
  std::vector<int> depth(m, 0), pending = in_degree;
  std::queue<int> queue;
  for (int i = 0; i < m; ++i)
    if (pending[i] == 0) queue.push(i);
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop();
    for (int j : cond_succ[i]) {
      depth[j] = std::max(depth[j], depth[i] + 1);
      if (--pending[j] == 0) queue.push(j);
    }
  }

  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  for (auto& scc : raw) std::sort(scc.begin(), scc.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (depth[a] != depth[b]) return depth[a] < depth[b];
    return raw[a].front() < raw[b].front();
  });

  ComponentPartition p;
  for (int idx : order) {
    bool is_closed = in_degree[idx] == 0;
    p.sccs.push_back(raw[idx]);
    p.closed.push_back(is_closed);
    if (is_closed) {
      p.csc_sizes.push_back(static_cast<int>(raw[idx].size()));
      for (int v : raw[idx]) p.leaders.push_back(v);
    } else {
      for (int v : raw[idx]) p.followers.push_back(v);
    }
  }
  std::sort(p.leaders.begin(), p.leaders.end());
  std::sort(p.followers.begin(), p.followers.end());
  p.csc_count = static_cast<int>(p.csc_sizes.size());
  p.leader_count = static_cast<int>(p.leaders.size());
  return p;
}

const char* to_string(Connectivity c) {
  switch (c) {
    case Connectivity::kStrong: return "strong";
    case Connectivity::kQuasiStrong: return "quasi_strong";
    case Connectivity::kWeak: return "weak";
    case Connectivity::kDisconnected: return "disconnected";
  }
  return "unknown";
}

Connectivity classify_connectivity(const SignedDigraph& g) {
  return classify_connectivity(g, strong_components(g));
}

Connectivity classify_connectivity(const SignedDigraph& g, const ComponentPartition& p) {
  if (p.sccs.size() == 1) return Connectivity::kStrong;
  // A root exists iff the condensation has a unique source, i.e. one CSC.
  if (p.csc_count == 1) return Connectivity::kQuasiStrong;

  // Undirected connectivity by union-find.
  std::vector<int> parent(g.n);
  for (int i = 0; i < g.n; ++i) parent[i] = i;
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& e : g.edges) parent[find(e.from)] = find(e.to);
  int root = find(0);
  for (int v = 1; v < g.n; ++v)
    if (find(v) != root) return Connectivity::kDisconnected;
  return Connectivity::kWeak;
}

BalanceVerdict structural_balance(const SignedDigraph& g) {
  std::vector<int> all(g.n);
  for (int i = 0; i < g.n; ++i) all[i] = i;
  return structural_balance(g, all);
}

BalanceVerdict structural_balance(const SignedDigraph& g, std::span<const int> nodes) {
  g.validate();
  if (nodes.empty()) throw ValidationError("structural_balance: empty node subset");

  std::vector<int> subset(nodes.begin(), nodes.end());
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (int v : subset)
    if (v < 0 || v >= g.n) throw ValidationError("structural_balance: node index out of range");

  std::vector<int> pos(g.n, -1);
  for (std::size_t i = 0; i < subset.size(); ++i) pos[subset[i]] = static_cast<int>(i);
  const int ns = static_cast<int>(subset.size());

  // Undirected constraint graph: one requirement g_to * g_from = sign(w) per
  // induced directed edge.
  struct Constraint {
    int other;
    int sign;
    Edge origin;
  };
  std::vector<std::vector<Constraint>> adj(ns);
  for (const Edge& e : g.edges) {
    int a = pos[e.from], b = pos[e.to];
    if (a == -1 || b == -1) continue;
    int s = sign_of(e.weight);
    adj[a].push_back({b, s, e});
    adj[b].push_back({a, s, e});
  }

  BalanceVerdict verdict;
  std::vector<int> gauge(ns, 0);
  std::vector<int> parent(ns, -1);
  std::vector<Edge> parent_edge(ns);

  for (int start = 0; start < ns; ++start) {
    if (gauge[start] != 0) continue;
    gauge[start] = 1;  // lowest index of this component gets +1
    std::queue<int> queue;
    queue.push(start);
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop();
      for (const Constraint& c : adj[v]) {
        int expected = gauge[v] * c.sign;
        if (gauge[c.other] == 0) {
          gauge[c.other] = expected;
          parent[c.other] = v;
          parent_edge[c.other] = c.origin;
          queue.push(c.other);
        } else if (gauge[c.other] != expected) {
          // Contradiction: tree paths from both endpoints plus this edge.
          verdict.balanced = false;
          auto path_to_root = [&](int x) {
            std::vector<Edge> path;
            while (parent[x] != -1) {
              path.push_back(parent_edge[x]);
              x = parent[x];
            }
            return path;
          };
          verdict.witness = path_to_root(v);
          auto other_path = path_to_root(c.other);
          verdict.witness.insert(verdict.witness.end(), other_path.begin(), other_path.end());
          verdict.witness.push_back(c.origin);
          return verdict;
        }
      }
    }
  }

  verdict.balanced = true;
  verdict.gauge = Eigen::VectorXd(ns);
  for (int i = 0; i < ns; ++i) verdict.gauge(i) = gauge[i];
  return verdict;
}

LaplacianBlocks laplacian_blocks(const SignedDigraph& g, const ComponentPartition& p) {
  LaplacianBlocks b;
  b.leader_count = p.leader_count;
  b.csc_sizes = p.csc_sizes;
  for (const auto& scc : p.sccs)
    for (int v : scc) b.permutation.push_back(v);

  const Eigen::MatrixXd l = g.laplacian();
  const int n = g.n;
  const int k = p.leader_count;
  b.permuted.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.permuted(i, j) = l(b.permutation[i], b.permutation[j]);

  // Leaders take no input from followers (or from other CSCs); anything else
  // means the partition and the graph disagree.
  if (k < n && b.permuted.topRightCorner(k, n - k).cwiseAbs().maxCoeff() != 0.0)
    throw NumericalError("laplacian_blocks: leader rows have follower entries");

  b.leader_block = b.permuted.topLeftCorner(k, k);
  b.follower_block = b.permuted.bottomRightCorner(n - k, n - k);
  b.cross_block = b.permuted.bottomLeftCorner(n - k, k);

  int offset = 0;
  for (int size : p.csc_sizes) {
    b.leader_blocks.push_back(b.leader_block.block(offset, offset, size, size));
    b.cross_blocks.push_back(b.cross_block.middleCols(offset, size));
    offset += size;
  }
  Eigen::MatrixXd off_diag = b.leader_block;
  offset = 0;
  for (int size : p.csc_sizes) {
    off_diag.block(offset, offset, size, size).setZero();
    offset += size;
  }
  if (k > 0 && off_diag.cwiseAbs().maxCoeff() != 0.0)
    throw NumericalError("laplacian_blocks: leader block is not block-diagonal");
  return b;
}

}  // namespace cansim
