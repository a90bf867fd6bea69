#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "maxplus/errors.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/spectral.hpp"

namespace maxplus {

/// One column of A~* per critical class, taken at the class's smallest node.
struct EigenBasis {
  Scalar lambda = zero;
  std::vector<Vector> columns;
  std::vector<NodeId> representatives;
  std::vector<std::size_t> class_of;  // column -> index into `classes`
  std::vector<NodeSet> classes;
};

template <bool E>
EigenBasis principal_eigenbasis(const BasicMatrix<E>& a, const Tolerance& tol = {}) {
  const NormalizedClosure nc = normalized_closure(a, tol);
  EigenBasis basis;
  basis.lambda = nc.rho;
  basis.classes = critical_classes(critical_graph(nc, tol), a.size());
  for (std::size_t c = 0; c < basis.classes.size(); ++c) {
    const NodeId rep = basis.classes[c].front();
    basis.columns.push_back(nc.closure.star.column(rep));
    basis.representatives.push_back(rep);
    basis.class_of.push_back(c);
  }
  return basis;
}

struct EigenCheckReport {
  // Largest |(Au)_i - lambda u_i| over checked rows where both sides are finite.
  double residual = 0.0;
  // Checked rows where exactly one side is the semiring zero (or either is +inf).
  NodeSet exact_zero_mismatch;
  // Checked rows whose individual test failed.
  NodeSet failing_rows;
  bool pass = true;
};

namespace detail {

inline NodeSet all_rows(std::size_t n) {
  NodeSet rows(n);
  for (NodeId i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

}  // namespace detail

/// Checks lambda u = A u row by row. `rows` limits the check to a subset,
/// which is how truncated window rows are exempted.
template <bool E>
EigenCheckReport check_eigen(const BasicMatrix<E>& a, Scalar lambda, const Vector& u, const Tolerance& tol = {},
                             const std::optional<NodeSet>& rows = std::nullopt) {
  if (is_zero_vector(u)) throw ZeroVectorError();
  const Vector au = mat_vec(a, u);
  EigenCheckReport rep;
  for (NodeId i : rows ? *rows : detail::all_rows(a.size())) {
    const Scalar lhs = au[i];
    const Scalar rhs = otimes(lambda, u[i]);
    if (std::isfinite(lhs) && std::isfinite(rhs)) {
      const double gap = std::fabs(lhs - rhs);
      rep.residual = std::max(rep.residual, gap);
      if (gap > tol.eps) rep.failing_rows.push_back(i);
    } else if (lhs != rhs) {
      rep.exact_zero_mismatch.push_back(i);
      rep.failing_rows.push_back(i);
    }
  }
  rep.pass = rep.exact_zero_mismatch.empty() && rep.residual <= tol.eps;
  return rep;
}

/// Checks A u <= lambda u; `residual` is the largest excess of (Au)_i over
/// lambda u_i.
template <bool E>
EigenCheckReport check_super_eigen(const BasicMatrix<E>& a, Scalar lambda, const Vector& u, const Tolerance& tol = {},
                                   const std::optional<NodeSet>& rows = std::nullopt) {
  if (is_zero_vector(u)) throw ZeroVectorError();
  const Vector au = mat_vec(a, u);
  EigenCheckReport rep;
  for (NodeId i : rows ? *rows : detail::all_rows(a.size())) {
    const Scalar lhs = au[i];
    const Scalar rhs = otimes(lambda, u[i]);
    if (lhs == zero || rhs == top) continue;
    if (std::isfinite(lhs) && std::isfinite(rhs)) {
      rep.residual = std::max(rep.residual, lhs - rhs);
      if (lhs > rhs + tol.eps) rep.failing_rows.push_back(i);
    } else {
      rep.exact_zero_mismatch.push_back(i);
      rep.failing_rows.push_back(i);
    }
  }
  rep.pass = rep.exact_zero_mismatch.empty() && rep.residual <= tol.eps;
  return rep;
}

struct Decomposition {
  std::vector<std::pair<NodeId, Scalar>> coefficients;  // critical node -> u_j
  Vector reconstruction;
  double residual = 0.0;
};

inline double max_gap(const Vector& u, const Vector& v) {
  double gap = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == v[i]) continue;
    if (!std::isfinite(u[i]) || !std::isfinite(v[i])) return top;
    gap = std::max(gap, std::fabs(u[i] - v[i]));
  }
  return gap;
}

/// Writes a rho(A)-eigenvector as the combination of critical columns of
/// A~* with coefficients u_j (j critical).
template <bool E>
Decomposition decompose(const BasicMatrix<E>& a, const Vector& u, const Tolerance& tol = {}) {
  const NormalizedClosure nc = normalized_closure(a, tol);
  if (!check_eigen(a, nc.rho, u, tol).pass) throw NotEigenvectorError("decompose: u is not a rho(A)-eigenvector");
  Decomposition d;
  d.reconstruction.assign(a.size(), zero);
  for (NodeId j : recurrent_nodes(nc, tol)) {
    d.coefficients.emplace_back(j, u[j]);
    d.reconstruction = vec_oplus(d.reconstruction, vec_scale(u[j], nc.closure.star.column(j)));
  }
  d.residual = max_gap(u, d.reconstruction);
  return d;
}

/// Shift so that the largest finite entry is 0.
inline Vector normalize_vector(const Vector& u) {
  Scalar m = zero;
  for (Scalar v : u)
    if (std::isfinite(v)) m = std::max(m, v);
  return m == zero ? u : vec_scale(-m, u);
}

/// Best approximation of u from below by the span of `family`:
/// the join over v of (min_i u_i - v_i) v.
inline Vector residuated_span(const Vector& u, const std::vector<Vector>& family) {
  Vector w(u.size(), zero);
  for (const Vector& v : family) {
    if (v.size() != u.size()) throw DimensionError("residuated_span: dimension mismatch");
    Scalar alpha = top;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (v[i] != zero) alpha = std::min(alpha, odiv(u[i], v[i]));
    if (alpha == top || alpha == zero) continue;
    w = vec_oplus(w, vec_scale(alpha, v));
  }
  return w;
}

/// u is extremal in the span of `family` (plus u) when the other members,
/// each scaled as far as they stay below u, fail to rebuild it. Members
/// proportional to u are not counted as "other".
inline bool is_extremal(const Vector& u, const std::vector<Vector>& family, const Tolerance& tol = {}) {
  if (is_zero_vector(u)) throw ZeroVectorError();
  const Vector un = normalize_vector(u);
  std::vector<Vector> others;
  for (const Vector& v : family)
    if (!is_zero_vector(v) && !approx_equal(normalize_vector(v), un, tol)) others.push_back(normalize_vector(v));
  return !approx_equal(residuated_span(un, others), un, tol);
}

struct ClassProportionality {
  NodeSet cls;
  Scalar constant = zero;  // v|C = constant + w|C
  bool proportional = false;
};

template <bool E>
std::vector<ClassProportionality> restriction_proportionality_check(const BasicMatrix<E>& a, const Vector& v,
                                                                    const Vector& w, const Tolerance& tol = {}) {
  const NormalizedClosure nc = normalized_closure(a, tol);
  if (!check_super_eigen(a, nc.rho, v, tol).pass || !check_super_eigen(a, nc.rho, w, tol).pass)
    throw NotSuperEigenvectorError("proportionality check needs two rho(A)-super-eigenvectors");
  std::vector<ClassProportionality> out;
  for (const NodeSet& cls : recurrence_classes(nc, tol)) {
    ClassProportionality r{cls, zero, false};
    const auto k = std::find_if(cls.begin(), cls.end(),
                                [&](NodeId i) { return std::isfinite(v[i]) && std::isfinite(w[i]); });
    if (k == cls.end()) {
      r.proportional = std::all_of(cls.begin(), cls.end(), [&](NodeId i) { return v[i] == zero && w[i] == zero; });
    } else {
      r.constant = v[*k] - w[*k];
      r.proportional = std::all_of(cls.begin(), cls.end(),
                                   [&](NodeId i) { return tol.eq(v[i], otimes(r.constant, w[i])); });
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct NodeEquality {
  NodeId node;
  Scalar lhs;  // (Au)_i
  Scalar rhs;  // rho u_i
  bool equal;
};

/// At every recurrent node a rho(A)-super-eigenvector is tight: (Au)_i = rho u_i.
template <bool E>
std::vector<NodeEquality> minimum_principle_check(const BasicMatrix<E>& a, const Vector& u,
                                                  const Tolerance& tol = {}) {
  const NormalizedClosure nc = normalized_closure(a, tol);
  if (!check_super_eigen(a, nc.rho, u, tol).pass)
    throw NotSuperEigenvectorError("minimum principle needs A u <= rho u");
  const Vector au = mat_vec(a, u);
  std::vector<NodeEquality> out;
  for (NodeId i : recurrent_nodes(nc, tol)) {
    const Scalar rhs = otimes(nc.rho, u[i]);
    out.push_back({i, au[i], rhs, tol.eq(au[i], rhs)});
  }
  return out;
}

}  // namespace maxplus
