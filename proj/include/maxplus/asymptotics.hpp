#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "maxplus/errors.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/spectral.hpp"

namespace maxplus {

// Entries at or below this value count as the semiring zero in asymptotic
// verdicts.
inline constexpr Scalar default_floor = -1e9;

/// Values of (A^n)_ij (or of the normalized matrix) for n = 1..n_max.
struct PowerTrace {
  NodeId i = 0;
  NodeId j = 0;
  std::vector<Scalar> values;  // values[n - 1] = (A^n)_ij
  bool normalized = false;

  std::size_t n_max() const noexcept { return values.size(); }
  Scalar at(std::size_t n) const { return values.at(n - 1); }
};

template <bool E>
PowerTrace power_trace(const BasicMatrix<E>& a, NodeId i, NodeId j, std::size_t n_max, bool normalized) {
  if (n_max < 1) throw Error("power_trace: n_max must be >= 1");
  if (i >= a.size() || j >= a.size()) throw DimensionError("power_trace: node out of range");
  const BasicMatrix<E> base = normalized ? normalize(a) : a;
  PowerTrace t{i, j, {}, normalized};
  t.values.reserve(n_max);
  BasicMatrix<E> power = base;
  for (std::size_t n = 1; n <= n_max; ++n) {
    t.values.push_back(power(i, j));
    if (n < n_max) power = mat_mul(power, base);
  }
  return t;
}

/// All entries of A^1..A^n_max, for suites that need many traces of one matrix.
class PowerTable {
 public:
  template <bool E>
  PowerTable(const BasicMatrix<E>& a, std::size_t n_max) : n_(a.size()) {
    Matrix base(a);
    Matrix power = base;
    data_.reserve(n_max * n_ * n_);
    for (std::size_t n = 1; n <= n_max; ++n) {
      data_.insert(data_.end(), power.data().begin(), power.data().end());
      if (n < n_max) power = mat_mul(power, base);
    }
  }

  std::size_t n_max() const noexcept { return n_ == 0 ? 0 : data_.size() / (n_ * n_); }
  Scalar operator()(std::size_t n, NodeId i, NodeId j) const { return data_[(n - 1) * n_ * n_ + i * n_ + j]; }

  PowerTrace trace(NodeId i, NodeId j, bool normalized) const {
    PowerTrace t{i, j, {}, normalized};
    for (std::size_t n = 1; n <= n_max(); ++n) t.values.push_back((*this)(n, i, j));
    return t;
  }

 private:
  std::size_t n_;
  std::vector<Scalar> data_;
};

enum class CouplingVerdict { periodic, transient_to_zero, inconclusive };

inline const char* to_string(CouplingVerdict v) {
  switch (v) {
    case CouplingVerdict::periodic: return "periodic";
    case CouplingVerdict::transient_to_zero: return "transient-to-zero";
    case CouplingVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CouplingReport {
  std::size_t sigma = 1;
  std::size_t n0 = 0;
  CouplingVerdict verdict = CouplingVerdict::inconclusive;
};

inline std::vector<std::size_t> divisors(std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t d = 1; d <= m; ++d)
    if (m % d == 0) out.push_back(d);
  return out;
}

/// Empirical coupling detection on a trace.
///
/// Looks, for each divisor sigma of `sigma_hint` in increasing order, for
/// the smallest n0 such that values[n + sigma] = values[n] for all n >= n0
/// still inside the trace, and accepts it once at least 3 sigma steps
/// confirm it. A tail that sits below `floor`, or whose every residue class
/// mod `sigma_hint` keeps strictly decreasing over the second half of the
/// trace, is reported as transient to zero.
inline CouplingReport detect_coupling(const PowerTrace& trace, std::size_t sigma_hint, const Tolerance& tol = {},
                                      Scalar floor = default_floor) {
  const std::size_t len = trace.n_max();
  const auto& v = trace.values;
  sigma_hint = std::max<std::size_t>(sigma_hint, 1);
  auto below = [&](Scalar x) { return x <= floor; };

  // Tail already at the floor.
  {
    std::size_t k = len;
    while (k > 0 && below(v[k - 1])) --k;
    if (len - k >= std::max<std::size_t>(3 * sigma_hint, 3)) return {1, k + 1, CouplingVerdict::transient_to_zero};
  }

  for (std::size_t sigma : divisors(sigma_hint)) {
    if (len <= sigma) break;
    // Smallest n0 (1-based) such that the tail from n0 is sigma-periodic.
    std::size_t n0 = 1;
    for (std::size_t n = len - sigma; n >= 1; --n) {
      if (!tol.eq(v[n - 1 + sigma], v[n - 1])) {
        n0 = n + 1;
        break;
      }
    }
    const std::size_t verified = len - sigma + 1 >= n0 ? len - sigma + 1 - n0 : 0;
    if (verified >= 3 * sigma) return {sigma, n0, CouplingVerdict::periodic};
  }

  // Drift: in every residue class the second half of the trace is either at
  // the floor or strictly decreasing.
  bool drifting = len >= 4 * sigma_hint;
  bool any_finite = false;
  for (std::size_t r = 0; drifting && r < sigma_hint; ++r) {
    std::optional<Scalar> prev;
    for (std::size_t n = len / 2 + 1; n <= len; ++n) {
      if ((n - 1) % sigma_hint != r) continue;
      const Scalar x = v[n - 1];
      if (below(x)) continue;
      any_finite = true;
      if (prev && !(x < *prev - tol.eps)) {
        drifting = false;
        break;
      }
      prev = x;
    }
  }
  if (drifting && any_finite) return {sigma_hint, 0, CouplingVerdict::transient_to_zero};
  return {sigma_hint, 0, CouplingVerdict::inconclusive};
}

/// Right-hand side of the cyclicity formula
///   A~^n_ij = max_{k critical} (A~^q (A~^s)*)_ik + (A~^q' (A~^s)*)_kj,
/// precomputed for one period s and all q in [0, s).
class CyclicityFormula {
 public:
  template <bool E>
  CyclicityFormula(const BasicMatrix<E>& a, std::size_t sigma, const Tolerance& tol = {}) : sigma_(sigma) {
    if (sigma == 0) throw Error("cyclicity formula: period must be positive");
    const NormalizedClosure nc = normalized_closure(a, tol);
    critical_ = recurrent_nodes(nc, tol);
    if (critical_.empty()) throw NoCriticalNodesError();
    normalized_ = nc.normalized;
    const ExtMatrix block_star = kleene_star(mat_pow(normalized_, sigma), tol).star;
    ExtMatrix left = block_star;
    for (std::size_t q = 0; q < sigma; ++q) {
      factors_.push_back(left);
      left = mat_mul(normalized_, left);
    }
  }

  std::size_t sigma() const noexcept { return sigma_; }
  const Matrix& normalized() const noexcept { return normalized_; }
  const NodeSet& critical_nodes() const noexcept { return critical_; }

  Scalar rhs(NodeId i, NodeId j, std::size_t q, std::size_t q_prime) const {
    if (q >= sigma_ || q_prime >= sigma_) throw Error("cyclicity formula: q, q' must lie in [0, sigma)");
    Scalar best = zero;
    for (NodeId k : critical_) best = oplus(best, otimes(factors_[q](i, k), factors_[q_prime](k, j)));
    return best;
  }

 private:
  std::size_t sigma_;
  Matrix normalized_;
  NodeSet critical_;
  std::vector<ExtMatrix> factors_;  // factors_[q] = A~^q (A~^sigma)*
};

struct FormulaCheck {
  Scalar lhs = zero;
  Scalar rhs = zero;
  bool pass = false;
};

/// Evaluates both sides of the cyclicity formula at (i, j, n). Defaults to
/// q = n mod sigma, q' = 0; explicit q, q' must satisfy q + q' = n (mod sigma).
template <bool E>
FormulaCheck verify_cyclicity_formula(const BasicMatrix<E>& a, NodeId i, NodeId j, std::size_t n, std::size_t sigma_ij,
                                std::optional<std::size_t> q = std::nullopt,
                                std::optional<std::size_t> q_prime = std::nullopt, const Tolerance& tol = {}) {
  const CyclicityFormula f(a, sigma_ij, tol);
  const std::size_t qq = q.value_or(n % sigma_ij);
  const std::size_t qp = q_prime.value_or((n % sigma_ij + sigma_ij - qq % sigma_ij) % sigma_ij);
  if ((qq + qp) % sigma_ij != n % sigma_ij) throw Error("cyclicity formula: q + q' must equal n mod sigma");
  FormulaCheck c;
  c.lhs = mat_pow(f.normalized(), n)(i, j);
  c.rhs = f.rhs(i, j, qq, qp);
  c.pass = tol.eq(c.lhs, c.rhs);
  return c;
}

struct OptimalPath {
  std::vector<NodeId> nodes;  // n + 1 nodes
  Scalar weight = zero;
  std::size_t noncritical_count = 0;  // positions of `nodes` outside N^c(A), with multiplicity
};

/// Maximal-weight path of exactly n arcs from i to j; ties go to the
/// smallest next node. `critical` marks N^c(A) for the non-critical count.
template <bool E>
OptimalPath optimal_path(const BasicMatrix<E>& a, NodeId i, NodeId j, std::size_t n, const std::vector<bool>& critical,
                         const Tolerance& tol = {}) {
  const std::size_t m = a.size();
  if (i >= m || j >= m) throw DimensionError("optimal_path: node out of range");
  // best[t][k]: best weight of a t-arc path from k to j.
  std::vector<Vector> best(n + 1, Vector(m, zero));
  best[0][j] = unit;
  for (std::size_t t = 1; t <= n; ++t)
    for (NodeId k = 0; k < m; ++k)
      for (NodeId l = 0; l < m; ++l) best[t][k] = oplus(best[t][k], otimes(a(k, l), best[t - 1][l]));
  if (best[n][i] == zero) throw NoPathError("optimal_path: no path of the requested length");

  OptimalPath p;
  p.nodes.push_back(i);
  p.weight = unit;
  NodeId cur = i;
  for (std::size_t t = n; t >= 1; --t) {
    for (NodeId l = 0; l < m; ++l) {
      const Scalar via = otimes(a(cur, l), best[t - 1][l]);
      if (via != zero && via >= best[t][cur] - tol.eps) {
        p.weight = otimes(p.weight, a(cur, l));
        cur = l;
        break;
      }
    }
    p.nodes.push_back(cur);
  }
  for (NodeId v : p.nodes)
    if (v >= critical.size() || !critical[v]) ++p.noncritical_count;
  return p;
}

template <bool E>
std::vector<bool> critical_mask(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  std::vector<bool> mask(a.size(), false);
  if (max_cycle_mean(a) == zero) return mask;
  for (NodeId v : recurrent_nodes(a, tol)) mask[v] = true;
  return mask;
}

template <bool E>
OptimalPath optimal_path(const BasicMatrix<E>& a, NodeId i, NodeId j, std::size_t n, const Tolerance& tol = {}) {
  return optimal_path(a, i, j, n, critical_mask(a, tol), tol);
}

struct TurnpikeProfile {
  std::vector<std::pair<std::size_t, std::size_t>> counts;  // (n, noncritical_count)
  std::size_t max_count = 0;                                // empirical m_ij
};

template <bool E>
TurnpikeProfile turnpike_profile(const BasicMatrix<E>& a, NodeId i, NodeId j, const std::vector<std::size_t>& n_list,
                                 const Tolerance& tol = {}) {
  if (!is_irreducible(a)) throw NotIrreducibleError();
  const auto mask = critical_mask(a, tol);
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) throw NoCriticalNodesError();
  TurnpikeProfile prof;
  for (std::size_t n : n_list) {
    const OptimalPath p = optimal_path(a, i, j, n, mask, tol);
    prof.counts.emplace_back(n, p.noncritical_count);
    prof.max_count = std::max(prof.max_count, p.noncritical_count);
  }
  return prof;
}

enum class TransienceVerdict { pass, inconclusive, not_applicable };

inline const char* to_string(TransienceVerdict v) {
  switch (v) {
    case TransienceVerdict::pass: return "pass";
    case TransienceVerdict::inconclusive: return "inconclusive";
    case TransienceVerdict::not_applicable: return "not-applicable";
  }
  return "?";
}

struct TransienceReport {
  TransienceVerdict verdict = TransienceVerdict::not_applicable;
  // first_passage[i * n + j]: least n such that (A^m)_ij <= floor for all
  // m in [n, n_max]; 0 when the entry is still above the floor at n_max.
  std::vector<std::size_t> first_passage;
  std::size_t max_first_passage = 0;
};

/// When rho(A) < 1 (or there is no critical node) every entry of A^n must
/// sink below `floor`; reports when each entry does so within n_max.
template <bool E>
TransienceReport transience_check(const BasicMatrix<E>& a, Scalar floor, std::size_t n_max, const Tolerance& tol = {}) {
  TransienceReport rep;
  const Scalar rho = max_cycle_mean(a);
  if (!(rho == zero || rho < unit - tol.eps)) return rep;
  const std::size_t m = a.size();
  std::vector<std::size_t> last_above(m * m, 0);
  Matrix base(a);
  Matrix power = base;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t k = 0; k < m * m; ++k)
      if (power.data()[k] > floor) last_above[k] = n;
    if (n < n_max) power = mat_mul(power, base);
  }
  rep.first_passage.resize(m * m);
  bool all = true;
  for (std::size_t k = 0; k < m * m; ++k) {
    if (last_above[k] == n_max) {
      rep.first_passage[k] = 0;
      all = false;
    } else {
      rep.first_passage[k] = last_above[k] + 1;
      rep.max_first_passage = std::max(rep.max_first_passage, rep.first_passage[k]);
    }
  }
  rep.verdict = all ? TransienceVerdict::pass : TransienceVerdict::inconclusive;
  return rep;
}

}  // namespace maxplus
