#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxplus/errors.hpp"
#include "maxplus/scalar.hpp"

namespace maxplus {

using Vector = std::vector<Scalar>;

struct Arc {
  NodeId from;
  NodeId to;
  Scalar weight;
};

/// Square max-plus matrix over the node set [0, n).
///
/// Storage is dense; an entry equal to the semiring zero is an absent arc.
/// With `Extended == false` entries must be finite or zero. The extended
/// variant additionally admits +inf and is what closures return.
template <bool Extended>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  explicit BasicMatrix(std::size_t n) : n_(n), data_(n * n, zero) {}

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = unit;
    return m;
  }

  static BasicMatrix from_rows(const std::vector<std::vector<Scalar>>& rows) {
    BasicMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw DimensionError("from_rows: matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  Scalar operator()(NodeId i, NodeId j) const noexcept { return data_[i * n_ + j]; }
  Scalar at(NodeId i, NodeId j) const {
    check_index(i, j);
    return data_[i * n_ + j];
  }

  void set(NodeId i, NodeId j, Scalar w) {
    check_index(i, j);
    if (std::isnan(w)) throw Error("matrix entry is NaN");
    if (!Extended && w == top) throw Error("+inf entry in a finite matrix");
    data_[i * n_ + j] = w;
  }

  bool has_arc(NodeId i, NodeId j) const noexcept { return data_[i * n_ + j] != zero; }

  std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j = 0; j < n_; ++j)
        if (has_arc(i, j)) out.push_back({i, j, (*this)(i, j)});
    return out;
  }

  std::vector<NodeId> successors(NodeId i) const {
    std::vector<NodeId> out;
    for (NodeId j = 0; j < n_; ++j)
      if (has_arc(i, j)) out.push_back(j);
    return out;
  }

  Vector column(NodeId j) const {
    Vector c(n_);
    for (NodeId i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  Vector row(NodeId i) const { return Vector(data_.begin() + i * n_, data_.begin() + (i + 1) * n_); }

  bool has_top() const noexcept {
    return std::any_of(data_.begin(), data_.end(), [](Scalar v) { return v == top; });
  }

  // Entrywise shift of every finite entry: lambda^{-1} A in max-plus terms.
  BasicMatrix shifted(Scalar delta) const {
    BasicMatrix m(*this);
    for (auto& v : m.data_)
      if (std::isfinite(v)) v += delta;
    return m;
  }

  BasicMatrix transposed() const {
    BasicMatrix m(n_);
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j = 0; j < n_; ++j) m.data_[j * n_ + i] = (*this)(i, j);
    return m;
  }

  // Principal submatrix on `nodes`, in the given order.
  BasicMatrix restricted(const std::vector<NodeId>& nodes) const {
    BasicMatrix m(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a)
      for (std::size_t b = 0; b < nodes.size(); ++b) m.data_[a * nodes.size() + b] = at(nodes[a], nodes[b]);
    return m;
  }

  const std::vector<Scalar>& data() const noexcept { return data_; }

  // Cosmetic node names; empty when unset.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_) throw DimensionError("label count differs from node count");
    labels_ = std::move(labels);
  }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

  // Only the extended -> finite direction can fail.
  template <bool E>
  explicit BasicMatrix(const BasicMatrix<E>& other) : n_(other.size()), data_(other.data()) {
    if (!Extended && E && has_top()) throw Error("matrix has +inf entries");
  }

 private:
  void check_index(NodeId i, NodeId j) const {
    if (i >= n_ || j >= n_) throw DimensionError("matrix index out of range");
  }

  std::size_t n_ = 0;
  std::vector<Scalar> data_;
  std::vector<std::string> labels_;
};

using Matrix = BasicMatrix<false>;
using ExtMatrix = BasicMatrix<true>;

template <bool EA, bool EB>
BasicMatrix<EA || EB> mat_mul(const BasicMatrix<EA>& a, const BasicMatrix<EB>& b) {
  if (a.size() != b.size()) throw DimensionError("mat_mul: dimension mismatch");
  const std::size_t n = a.size();
  BasicMatrix<EA || EB> c(n);
  std::vector<Scalar> acc(n);
  for (NodeId i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), zero);
    for (NodeId k = 0; k < n; ++k) {
      const Scalar aik = a(i, k);
      if (aik == zero) continue;
      for (NodeId j = 0; j < n; ++j) acc[j] = oplus(acc[j], otimes(aik, b(k, j)));
    }
    for (NodeId j = 0; j < n; ++j) c.set(i, j, acc[j]);
  }
  return c;
}

template <bool E>
Vector mat_vec(const BasicMatrix<E>& a, const Vector& u) {
  if (a.size() != u.size()) throw DimensionError("mat_vec: dimension mismatch");
  Vector out(a.size(), zero);
  for (NodeId i = 0; i < a.size(); ++i)
    for (NodeId j = 0; j < a.size(); ++j) out[i] = oplus(out[i], otimes(a(i, j), u[j]));
  return out;
}

template <bool EA, bool EB>
BasicMatrix<EA || EB> mat_add(const BasicMatrix<EA>& a, const BasicMatrix<EB>& b) {
  if (a.size() != b.size()) throw DimensionError("mat_add: dimension mismatch");
  BasicMatrix<EA || EB> c(a.size());
  for (NodeId i = 0; i < a.size(); ++i)
    for (NodeId j = 0; j < a.size(); ++j) c.set(i, j, oplus(a(i, j), b(i, j)));
  return c;
}

// Max-plus power by repeated squaring; A^0 = I.
template <bool E>
BasicMatrix<E> mat_pow(const BasicMatrix<E>& a, std::size_t k) {
  auto result = BasicMatrix<E>::identity(a.size());
  auto base = a;
  while (k > 0) {
    if (k & 1U) result = mat_mul(result, base);
    k >>= 1U;
    if (k > 0) base = mat_mul(base, base);
  }
  return result;
}

template <bool E>
Scalar trace(const BasicMatrix<E>& a) {
  Scalar t = zero;
  for (NodeId i = 0; i < a.size(); ++i) t = oplus(t, a(i, i));
  return t;
}

inline Vector vec_oplus(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw DimensionError("vec_oplus: dimension mismatch");
  Vector w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = oplus(u[i], v[i]);
  return w;
}

inline Vector vec_scale(Scalar c, const Vector& u) {
  Vector w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = otimes(c, u[i]);
  return w;
}

inline bool is_zero_vector(const Vector& u) {
  return std::all_of(u.begin(), u.end(), [](Scalar v) { return v == zero; });
}

template <bool EA, bool EB>
bool approx_equal(const BasicMatrix<EA>& a, const BasicMatrix<EB>& b, const Tolerance& tol = {}) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (!tol.eq(a.data()[k], b.data()[k])) return false;
  return true;
}

inline bool approx_equal(const Vector& a, const Vector& b, const Tolerance& tol = {}) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!tol.eq(a[k], b[k])) return false;
  return true;
}

}  // namespace maxplus
