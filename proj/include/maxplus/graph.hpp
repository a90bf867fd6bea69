#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

#include "maxplus/matrix.hpp"

namespace maxplus {

using NodeSet = std::vector<NodeId>;
using ArcSet = std::vector<std::pair<NodeId, NodeId>>;

/// Strongly connected components of a digraph on [0, n).
///
/// Classes are numbered by their smallest node and each class lists its
/// nodes in increasing order. `condensation` holds one (from, to) class
/// pair per arc of the graph joining two distinct classes, so it is a
/// multigraph whose underlying simple graph is acyclic.
struct SccPartition {
  std::vector<std::size_t> class_of;
  std::vector<NodeSet> classes;
  std::vector<std::pair<std::size_t, std::size_t>> condensation;

  std::size_t count() const noexcept { return classes.size(); }
};

namespace detail {

// Iterative Tarjan over an adjacency list.
inline std::vector<std::size_t> tarjan(const std::vector<NodeSet>& adj, std::size_t& ncomp) {
  const std::size_t n = adj.size();
  constexpr std::int64_t unvisited = -1;
  std::vector<std::int64_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> comp(n, 0), stack;
  std::vector<std::pair<NodeId, std::size_t>> call;  // node, next edge position
  std::int64_t counter = 0;
  ncomp = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        const NodeId w = adj[v][pos++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const NodeId done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != done);
        ++ncomp;
      }
    }
  }
  return comp;
}

}  // namespace detail

inline SccPartition scc_of_graph(std::size_t n, const ArcSet& arcs) {
  std::vector<NodeSet> adj(n);
  for (const auto& [u, v] : arcs) {
    if (u >= n || v >= n) throw DimensionError("arc endpoint out of range");
    adj[u].push_back(v);
  }
  std::size_t ncomp = 0;
  const auto raw = detail::tarjan(adj, ncomp);

  // Renumber by smallest member.
  std::vector<std::size_t> relabel(ncomp, SIZE_MAX);
  std::size_t next = 0;
  for (NodeId v = 0; v < n; ++v)
    if (relabel[raw[v]] == SIZE_MAX) relabel[raw[v]] = next++;

  SccPartition p;
  p.class_of.resize(n);
  p.classes.resize(ncomp);
  for (NodeId v = 0; v < n; ++v) {
    p.class_of[v] = relabel[raw[v]];
    p.classes[p.class_of[v]].push_back(v);
  }
  for (const auto& [u, v] : arcs)
    if (p.class_of[u] != p.class_of[v]) p.condensation.emplace_back(p.class_of[u], p.class_of[v]);
  return p;
}

template <bool E>
ArcSet arc_set(const BasicMatrix<E>& a) {
  ArcSet out;
  for (NodeId i = 0; i < a.size(); ++i)
    for (NodeId j = 0; j < a.size(); ++j)
      if (a.has_arc(i, j)) out.emplace_back(i, j);
  return out;
}

template <bool E>
SccPartition scc(const BasicMatrix<E>& a) {
  return scc_of_graph(a.size(), arc_set(a));
}

// A lone node without a self-loop still counts as strongly connected.
template <bool E>
bool is_irreducible(const BasicMatrix<E>& a) {
  return a.size() > 0 && scc(a).count() == 1;
}

/// Cyclicity of the subgraph induced by `nodes` and `arcs` (arcs with an
/// endpoint outside `nodes` are ignored): gcd of circuit lengths inside each
/// strongly connected component that has a circuit, lcm over those
/// components, and 1 when there is none.
///
/// Per component, BFS levels from a root give the gcd as the gcd of
/// level(u) + 1 - level(v) over the component's arcs.
inline std::size_t cyclicity(const NodeSet& nodes, const ArcSet& arcs) {
  if (nodes.empty()) return 1;
  const NodeId n = *std::max_element(nodes.begin(), nodes.end()) + 1;
  std::vector<bool> in(n, false);
  for (NodeId v : nodes) in[v] = true;
  ArcSet kept;
  for (const auto& [u, v] : arcs)
    if (u < n && v < n && in[u] && in[v]) kept.emplace_back(u, v);

  const SccPartition p = scc_of_graph(n, kept);
  std::vector<NodeSet> adj(n);
  for (const auto& [u, v] : kept)
    if (p.class_of[u] == p.class_of[v]) adj[u].push_back(v);

  std::size_t result = 1;
  std::vector<std::int64_t> level(n, -1);
  for (const NodeSet& cls : p.classes) {
    const NodeId root = cls.front();
    if (!in[root]) continue;
    level[root] = 0;
    std::queue<NodeId> bfs;
    bfs.push(root);
    std::int64_t g = 0;
    while (!bfs.empty()) {
      const NodeId u = bfs.front();
      bfs.pop();
      for (NodeId v : adj[u]) {
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          bfs.push(v);
        } else {
          g = std::gcd(g, level[u] + 1 - level[v]);
        }
      }
    }
    if (g != 0) result = std::lcm(result, static_cast<std::size_t>(g));
  }
  return result;
}

template <bool E>
std::size_t cyclicity(const BasicMatrix<E>& a) {
  NodeSet all(a.size());
  std::iota(all.begin(), all.end(), NodeId{0});
  return cyclicity(all, arc_set(a));
}

}  // namespace maxplus
