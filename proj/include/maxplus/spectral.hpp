#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "maxplus/errors.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/matrix.hpp"

namespace maxplus {

/// Maximal circuit mean of one strongly connected class, by Karp's
/// recurrence on walks of exact length from an arbitrary root. Returns the
/// semiring zero when the class carries no circuit.
template <bool E>
Scalar class_cycle_mean(const BasicMatrix<E>& a, const NodeSet& cls) {
  const std::size_t m = cls.size();
  if (m == 1 && !a.has_arc(cls[0], cls[0])) return zero;
  // d[k][v]: best weight of a walk with exactly k arcs from cls[0] to cls[v].
  std::vector<std::vector<Scalar>> d(m + 1, std::vector<Scalar>(m, zero));
  d[0][0] = unit;
  for (std::size_t k = 1; k <= m; ++k)
    for (std::size_t u = 0; u < m; ++u) {
      if (d[k - 1][u] == zero) continue;
      for (std::size_t v = 0; v < m; ++v)
        d[k][v] = oplus(d[k][v], otimes(d[k - 1][u], a(cls[u], cls[v])));
    }
  Scalar best = zero;
  for (std::size_t v = 0; v < m; ++v) {
    if (d[m][v] == zero) continue;
    Scalar worst = top;
    for (std::size_t k = 0; k < m; ++k)
      if (d[k][v] != zero) worst = std::min(worst, (d[m][v] - d[k][v]) / static_cast<double>(m - k));
    best = oplus(best, worst);
  }
  return best;
}

/// rho(A): the largest mean weight of a circuit of G(A), zero if acyclic.
template <bool E>
Scalar max_cycle_mean(const BasicMatrix<E>& a) {
  Scalar rho = zero;
  for (const auto& cls : scc(a).classes) rho = oplus(rho, class_cycle_mean(a, cls));
  return rho;
}

struct ClosureResult {
  ExtMatrix star;
  ExtMatrix plus;
  bool diverged = false;
};

/// A+ = A + A^2 + ... and A* = I + A+.
///
/// Classes whose circuit mean exceeds the unit by more than eps are found
/// first; every entry joined by a path through such a class is +inf. The
/// remaining entries only involve paths that avoid those classes and are
/// obtained by a Floyd-Warshall pass on the complementary subgraph.
template <bool E>
ClosureResult kleene_star(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  const std::size_t n = a.size();
  const SccPartition part = scc(a);
  std::vector<bool> hot(n, false);
  bool any_hot = false;
  for (const auto& cls : part.classes) {
    const Scalar r = class_cycle_mean(a, cls);
    if (r != zero && r > unit + tol.eps) {
      for (NodeId v : cls) hot[v] = true;
      any_hot = true;
    }
  }

  ClosureResult res;
  res.plus = ExtMatrix(n);
  std::vector<Scalar> p(n * n, zero);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (!hot[i] && !hot[j]) p[i * n + j] = a(i, j);
  for (NodeId k = 0; k < n; ++k) {
    if (hot[k]) continue;
    for (NodeId i = 0; i < n; ++i) {
      const Scalar pik = p[i * n + k];
      if (pik == zero) continue;
      for (NodeId j = 0; j < n; ++j) {
        const Scalar pkj = p[k * n + j];
        if (pkj != zero && pik + pkj > p[i * n + j]) p[i * n + j] = pik + pkj;
      }
    }
  }

  if (any_hot) {
    // Reflexive-transitive reachability, then mark paths through hot nodes.
    std::vector<char> reach(n * n, 0);
    for (NodeId i = 0; i < n; ++i) {
      reach[i * n + i] = 1;
      for (NodeId j = 0; j < n; ++j)
        if (a.has_arc(i, j)) reach[i * n + j] = 1;
    }
    for (NodeId k = 0; k < n; ++k)
      for (NodeId i = 0; i < n; ++i)
        if (reach[i * n + k])
          for (NodeId j = 0; j < n; ++j)
            if (reach[k * n + j]) reach[i * n + j] = 1;
    for (NodeId h = 0; h < n; ++h) {
      if (!hot[h]) continue;
      for (NodeId i = 0; i < n; ++i) {
        if (!reach[i * n + h]) continue;
        for (NodeId j = 0; j < n; ++j)
          if (reach[h * n + j]) p[i * n + j] = top;
      }
    }
  }

  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) res.plus.set(i, j, p[i * n + j]);
  res.star = mat_add(ExtMatrix::identity(n), res.plus);
  res.diverged = res.plus.has_top();
  return res;
}

/// rho(A)^{-1} A, i.e. rho subtracted from every arc.
template <bool E>
BasicMatrix<E> normalize(const BasicMatrix<E>& a) {
  const Scalar rho = max_cycle_mean(a);
  if (rho == zero) throw AcyclicError();
  return a.shifted(-rho);
}

struct CriticalGraph {
  NodeSet nodes;
  ArcSet arcs;
};

/// Everything the recurrence/critical queries need, computed once.
struct NormalizedClosure {
  Scalar rho = zero;
  Matrix normalized;
  ClosureResult closure;
};

template <bool E>
NormalizedClosure normalized_closure(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  NormalizedClosure nc;
  nc.rho = max_cycle_mean(a);
  if (nc.rho == zero) throw AcyclicError();
  nc.normalized = Matrix(a.shifted(-nc.rho));
  nc.closure = kleene_star(nc.normalized, tol);
  return nc;
}

inline NodeSet recurrent_nodes(const NormalizedClosure& nc, const Tolerance& tol = {}) {
  NodeSet out;
  for (NodeId i = 0; i < nc.normalized.size(); ++i)
    if (tol.eq(nc.closure.plus(i, i), unit)) out.push_back(i);
  return out;
}

template <bool E>
NodeSet recurrent_nodes(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  return recurrent_nodes(normalized_closure(a, tol), tol);
}

// i R j iff A~+_ij A~+_ji = 1, restricted to recurrent nodes.
inline std::vector<NodeSet> recurrence_classes(const NormalizedClosure& nc, const Tolerance& tol = {}) {
  std::vector<NodeSet> classes;
  const auto& plus = nc.closure.plus;
  for (NodeId i : recurrent_nodes(nc, tol)) {
    bool placed = false;
    for (auto& cls : classes) {
      const NodeId r = cls.front();
      if (tol.eq(otimes(plus(i, r), plus(r, i)), unit)) {
        cls.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({i});
  }
  return classes;
}

template <bool E>
std::vector<NodeSet> recurrence_classes(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  return recurrence_classes(normalized_closure(a, tol), tol);
}

// Arcs (i, j) with A~_ij A~+_ji = 1 form exactly the union of critical circuits.
inline CriticalGraph critical_graph(const NormalizedClosure& nc, const Tolerance& tol = {}) {
  CriticalGraph g;
  g.nodes = recurrent_nodes(nc, tol);
  const auto& an = nc.normalized;
  for (NodeId i = 0; i < an.size(); ++i)
    for (NodeId j = 0; j < an.size(); ++j)
      if (an.has_arc(i, j) && tol.eq(otimes(an(i, j), nc.closure.plus(j, i)), unit)) g.arcs.emplace_back(i, j);
  return g;
}

template <bool E>
CriticalGraph critical_graph(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  return critical_graph(normalized_closure(a, tol), tol);
}

/// Node sets of the strongly connected components of the critical graph.
inline std::vector<NodeSet> critical_classes(const CriticalGraph& g, std::size_t n) {
  const SccPartition p = scc_of_graph(n, g.arcs);
  std::vector<bool> critical(n, false);
  for (NodeId v : g.nodes) critical[v] = true;
  std::vector<NodeSet> out;
  for (const auto& cls : p.classes)
    if (critical[cls.front()]) out.push_back(cls);
  return out;
}

struct SpectralSummary {
  Scalar rho = zero;
  NodeSet critical_nodes;
  ArcSet critical_arcs;
  std::vector<NodeSet> critical_classes;
  std::vector<NodeSet> recurrence_classes;
  std::size_t gamma = 1;
  std::size_t sigma = 1;
  // Nodes whose recurrence decision was within 10 eps of the boundary.
  NodeSet marginal_nodes;
  double eps = 1e-9;
};

template <bool E>
SpectralSummary spectral_summary(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  SpectralSummary s;
  s.eps = tol.eps;
  s.gamma = cyclicity(a);
  s.rho = max_cycle_mean(a);
  if (s.rho == zero) return s;
  const NormalizedClosure nc = normalized_closure(a, tol);
  const CriticalGraph g = critical_graph(nc, tol);
  s.critical_nodes = g.nodes;
  s.critical_arcs = g.arcs;
  s.critical_classes = critical_classes(g, a.size());
  s.recurrence_classes = recurrence_classes(nc, tol);
  s.sigma = cyclicity(g.nodes, g.arcs);
  for (NodeId i = 0; i < a.size(); ++i)
    if (tol.marginal(nc.closure.plus(i, i), unit)) s.marginal_nodes.push_back(i);
  return s;
}

struct PathResidue {
  std::size_t residue = 0;
  // Least T such that every length n >= T with n = residue (mod gamma)
  // admits an i -> j path.
  std::size_t threshold = 0;
};

/// Residue class mod gamma(A) shared by all i -> j path lengths, and the
/// length from which every length in that class is realised. Runs the
/// boolean reachability sets from i until they repeat with period gamma.
template <bool E>
PathResidue nu_residue(const BasicMatrix<E>& a, NodeId i, NodeId j) {
  const std::size_t n = a.size();
  if (i >= n || j >= n) throw DimensionError("nu_residue: node out of range");
  if (!is_irreducible(a)) throw NotIrreducibleError();
  if (n == 1 && !a.has_arc(0, 0)) throw AcyclicError();
  const std::size_t gamma = cyclicity(a);
  const std::size_t cap = std::max(4 * n * gamma, n * n + 2 * gamma);

  std::vector<std::vector<char>> sets;
  sets.push_back(std::vector<char>(n, 0));
  sets[0][i] = 1;
  std::optional<std::size_t> residue;
  std::optional<std::size_t> last_miss;
  for (std::size_t t = 0;; ++t) {
    const auto& cur = sets[t];
    if (cur[j] && !residue) residue = t % gamma;
    if (t >= gamma && sets[t] == sets[t - gamma] && residue) break;
    if (t >= cap) throw CapReachedError("nu_residue: reachability did not saturate within the cap");
    std::vector<char> next(n, 0);
    for (NodeId u = 0; u < n; ++u)
      if (cur[u])
        for (NodeId v = 0; v < n; ++v)
          if (a.has_arc(u, v)) next[v] = 1;
    sets.push_back(std::move(next));
  }
  for (std::size_t t = 0; t < sets.size(); ++t)
    if (t % gamma == *residue && !sets[t][j]) last_miss = t;
  return {*residue, last_miss ? *last_miss + 1 : 0};
}

}  // namespace maxplus
