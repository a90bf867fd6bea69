#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "maxplus/eigen.hpp"
#include "maxplus/errors.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/spectral.hpp"

namespace maxplus {

struct KernelArc {
  NodeId to;
  Scalar weight;

  friend bool operator==(const KernelArc&, const KernelArc&) = default;
};

/// Optional exact values known for a kernel on S = N. Each entry may be
/// empty; the function forms return nullopt where no formula applies.
struct ClosedForms {
  std::optional<Scalar> rho;
  std::function<Scalar(NodeId, NodeId)> plus;  // A+_ij
  std::function<std::optional<Scalar>(Scalar lambda, NodeId k)> eigenvector;
  // Martin kernel for basepoint 0.
  std::function<std::optional<Scalar>(Scalar lambda, NodeId i, NodeId j)> martin;
  std::function<std::optional<Scalar>(NodeId i, NodeId j, std::size_t n)> power;  // (A^n)_ij

  std::optional<Scalar> star(NodeId i, NodeId j) const {
    if (!plus) return std::nullopt;
    return i == j ? oplus(unit, plus(i, j)) : plus(i, j);
  }
};

/// A kernel on S = N described row by row.
///
/// A right locally finite kernel gives each row as a finite arc list. A
/// kernel with infinite rows can still be windowed: it supplies only the
/// arcs of a row whose target does not exceed a bound.
class LazyKernel {
 public:
  using RowFn = std::function<std::vector<KernelArc>(NodeId)>;
  using BoundedRowFn = std::function<std::vector<KernelArc>(NodeId, NodeId)>;

  struct RowView {
    std::vector<KernelArc> arcs;
    std::optional<std::size_t> dropped;  // nullopt: infinitely many arcs left out
  };

  static LazyKernel locally_finite(std::string name, RowFn rows) {
    LazyKernel k;
    k.name = std::move(name);
    k.rows_ = std::move(rows);
    return k;
  }

  static LazyKernel with_infinite_rows(std::string name, BoundedRowFn rows) {
    LazyKernel k;
    k.name = std::move(name);
    k.bounded_rows_ = std::move(rows);
    return k;
  }

  bool right_locally_finite() const noexcept { return static_cast<bool>(rows_); }

  std::vector<KernelArc> row_arcs(NodeId i) const {
    if (!rows_) throw Error("kernel '" + name + "' has infinite rows");
    return rows_(i);
  }

  RowView row(NodeId i, NodeId max_target) const {
    RowView v;
    if (rows_) {
      std::size_t dropped = 0;
      for (const auto& arc : rows_(i)) {
        if (!std::isfinite(arc.weight)) throw Error("kernel '" + name + "' produced a non-finite arc");
        if (arc.to <= max_target)
          v.arcs.push_back(arc);
        else
          ++dropped;
      }
      v.dropped = dropped;
    } else {
      v.arcs = bounded_rows_(i, max_target);
      v.dropped = std::nullopt;
    }
    return v;
  }

  std::string name;
  std::string parameters;
  ClosedForms closed_forms;

 private:
  RowFn rows_;
  BoundedRowFn bounded_rows_;
};

/// Restriction of a kernel to {0..N}.
struct Window {
  std::size_t N = 0;
  Matrix matrix;
  // Arcs leaving the window; nullopt when some row loses infinitely many.
  std::optional<std::size_t> dropped_arcs;
  std::vector<bool> truncated_rows;

  /// Rows 1..N-1 whose arc lists were not cut by the window.
  NodeSet interior_rows() const {
    NodeSet out;
    for (NodeId i = 1; i + 1 <= N; ++i)
      if (!truncated_rows[i] || !dropped_arcs) out.push_back(i);
    return out;
  }
};

inline Window truncate(const LazyKernel& k, std::size_t N) {
  Window w;
  w.N = N;
  w.matrix = Matrix(N + 1);
  w.truncated_rows.assign(N + 1, false);
  std::size_t dropped = 0;
  bool unbounded = false;
  for (NodeId i = 0; i <= N; ++i) {
    const auto view = k.row(i, N);
    for (const auto& arc : view.arcs) w.matrix.set(i, arc.to, oplus(w.matrix(i, arc.to), arc.weight));
    if (!view.dropped) {
      unbounded = true;
      w.truncated_rows[i] = true;
    } else if (*view.dropped > 0) {
      dropped += *view.dropped;
      w.truncated_rows[i] = true;
    }
  }
  if (!unbounded) w.dropped_arcs = dropped;
  return w;
}

struct StarSample {
  std::size_t N = 0;
  Scalar star = zero;
  Scalar plus = zero;
  std::optional<Scalar> oracle;  // closed-form A*_ij when known
};

/// Windowed A*_ij (and A+_ij) along increasing window sizes.
inline std::vector<StarSample> window_star_limit(const LazyKernel& k, NodeId i, NodeId j,
                                                 const std::vector<std::size_t>& windows, const Tolerance& tol = {}) {
  std::vector<StarSample> out;
  for (std::size_t N : windows) {
    if (i > N || j > N) throw DimensionError("window_star_limit: node outside window");
    const ClosureResult c = kleene_star(truncate(k, N).matrix, tol);
    out.push_back({N, c.star(i, j), c.plus(i, j), k.closed_forms.star(i, j)});
  }
  return out;
}

struct TightnessReport {
  NodeId i = 0;
  NodeId j = 0;
  Scalar beta = zero;
  std::size_t N = 0;
  NodeSet level_set;  // {k : A*_ik A*_kj >= beta} inside the window
  bool saturated = false;
};

/// Super-level set of k -> A*_ik A*_kj on a window. The set is inconclusive
/// (saturated) when it reaches a row whose arcs were cut by the window.
inline TightnessReport property_T_probe(const LazyKernel& k, NodeId i, NodeId j, Scalar beta, std::size_t N,
                                        const Tolerance& tol = {}) {
  if (i > N || j > N) throw DimensionError("property_T_probe: node outside window");
  const Window w = truncate(k, N);
  const ClosureResult c = kleene_star(w.matrix, tol);
  TightnessReport r{i, j, beta, N, {}, false};
  for (NodeId m = 0; m <= N; ++m) {
    if (tol.le(beta, otimes(c.star(i, m), c.star(m, j)))) {
      r.level_set.push_back(m);
      if (w.truncated_rows[m]) r.saturated = true;
    }
  }
  return r;
}

struct MartinKernel {
  Vector pi;  // pi_j = (A_lambda)*_bj
  ExtMatrix K;
};

/// K_ij = (A_lambda)*_ij - pi_j on a window, with pi the basepoint row.
inline MartinKernel martin_kernel(const LazyKernel& k, Scalar lambda, NodeId b, std::size_t N,
                                  const Tolerance& tol = {}) {
  if (b > N) throw DimensionError("martin_kernel: basepoint outside window");
  const Matrix a = truncate(k, N).matrix;
  const Scalar rho = max_cycle_mean(a);
  if (rho != zero && rho > lambda + tol.eps) throw Error("martin_kernel: lambda is below the windowed rho");
  const ClosureResult c = kleene_star(a.shifted(-lambda), tol);
  MartinKernel mk;
  mk.pi = c.star.row(b);
  for (NodeId j = 0; j <= N; ++j)
    if (!std::isfinite(mk.pi[j]))
      throw UnreachableBasepointError("martin_kernel: node " + std::to_string(j) + " not reachable from basepoint");
  mk.K = ExtMatrix(N + 1);
  for (NodeId i = 0; i <= N; ++i)
    for (NodeId j = 0; j <= N; ++j) mk.K.set(i, j, odiv(c.star(i, j), mk.pi[j]));
  return mk;
}

struct BoundaryProbe {
  NodeId i = 0;
  std::vector<std::pair<NodeId, Scalar>> samples;  // (j, K_ij)
  bool stabilized = false;
  Scalar limit = zero;
};

/// Follows K_ij along j_list for a fixed row i; the limit is accepted when
/// the last three samples agree within eps.
inline BoundaryProbe boundary_column_probe(const MartinKernel& mk, NodeId i, const std::vector<NodeId>& j_list,
                                           const Tolerance& tol = {}) {
  BoundaryProbe p;
  p.i = i;
  for (NodeId j : j_list) p.samples.emplace_back(j, mk.K.at(i, j));
  const std::size_t s = p.samples.size();
  if (s >= 3 && tol.eq(p.samples[s - 1].second, p.samples[s - 2].second) &&
      tol.eq(p.samples[s - 1].second, p.samples[s - 3].second)) {
    p.stabilized = true;
    p.limit = p.samples.back().second;
  }
  return p;
}

inline BoundaryProbe boundary_column_probe(const LazyKernel& k, Scalar lambda, NodeId b, NodeId i,
                                           const std::vector<NodeId>& j_list, std::size_t N,
                                           const Tolerance& tol = {}) {
  if (!std::is_sorted(j_list.begin(), j_list.end()) || (!j_list.empty() && j_list.back() > N))
    throw Error("boundary_column_probe: j_list must be increasing and inside the window");
  return boundary_column_probe(martin_kernel(k, lambda, b, N, tol), i, j_list, tol);
}

/// Limit column estimate for rows 0..rows-1; nullopt when some row did not
/// stabilize.
inline std::optional<Vector> boundary_column(const MartinKernel& mk, std::size_t rows, const std::vector<NodeId>& j_list,
                                             const Tolerance& tol = {}) {
  Vector u(rows);
  for (NodeId i = 0; i < rows; ++i) {
    const BoundaryProbe p = boundary_column_probe(mk, i, j_list, tol);
    if (!p.stabilized) return std::nullopt;
    u[i] = p.limit;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Catalog

namespace kernels {

inline double harmonic(std::size_t a, std::size_t b) {  // sum_{k=a}^{b} 1/k
  double s = 0.0;
  for (std::size_t k = a; k <= b; ++k) s += 1.0 / static_cast<double>(k);
  return s;
}

/// i -> i+1 at 0 and i -> 0 at -1/i: rho = 1, A+ = 1 everywhere, no
/// critical circuit.
inline LazyKernel ladder() {
  auto k = LazyKernel::locally_finite("ladder", [](NodeId i) {
    std::vector<KernelArc> row{{i + 1, 0.0}};
    if (i > 0) row.push_back({0, -1.0 / static_cast<double>(i)});
    return row;
  });
  k.closed_forms.rho = 0.0;
  k.closed_forms.plus = [](NodeId, NodeId) { return 0.0; };
  k.closed_forms.eigenvector = [](Scalar lambda, NodeId) -> std::optional<Scalar> {
    if (lambda != 0.0) return std::nullopt;
    return 0.0;
  };
  return k;
}

/// As `ladder` but every return arc weighs -1: no recurrence class.
inline LazyKernel ladder_flat() {
  auto k = LazyKernel::locally_finite("ladder-flat", [](NodeId i) {
    std::vector<KernelArc> row{{i + 1, 0.0}};
    if (i > 0) row.push_back({0, -1.0});
    return row;
  });
  k.closed_forms.rho = 0.0;
  k.closed_forms.plus = [](NodeId i, NodeId j) { return i < j ? 0.0 : -1.0; };
  return k;
}

/// `ladder` plus a 0-loop at every node: every singleton is a critical class.
inline LazyKernel ladder_loops() {
  auto k = LazyKernel::locally_finite("ladder-loops", [](NodeId i) {
    std::vector<KernelArc> row{{i, 0.0}, {i + 1, 0.0}};
    if (i > 0) row.push_back({0, -1.0 / static_cast<double>(i)});
    return row;
  });
  k.closed_forms.rho = 0.0;
  k.closed_forms.plus = [](NodeId, NodeId) { return 0.0; };
  k.closed_forms.eigenvector = ladder().closed_forms.eigenvector;
  return k;
}

/// Up at 0, down at -1, a 0-loop at node 0.
inline LazyKernel tight1() {
  auto k = LazyKernel::locally_finite("tight1", [](NodeId i) {
    if (i == 0) return std::vector<KernelArc>{{0, 0.0}, {1, 0.0}};
    return std::vector<KernelArc>{{i - 1, -1.0}, {i + 1, 0.0}};
  });
  k.closed_forms.rho = 0.0;
  k.closed_forms.plus = [](NodeId i, NodeId j) {
    if (i > j) return static_cast<double>(j) - static_cast<double>(i);
    if (i == j && i != 0) return -1.0;
    return 0.0;
  };
  // Column 0 of A*, the critical eigenvector.
  k.closed_forms.eigenvector = [](Scalar lambda, NodeId i) -> std::optional<Scalar> {
    if (lambda != 0.0) return std::nullopt;
    return -static_cast<double>(i);
  };
  k.closed_forms.martin = [](Scalar lambda, NodeId i, NodeId j) -> std::optional<Scalar> {
    if (lambda != 0.0) return std::nullopt;  // pi = A*_0. is identically 0
    return i > j ? static_cast<double>(j) - static_cast<double>(i) : 0.0;
  };
  return k;
}

/// Up at 0, down from i at -1/i: harmonic closure, no critical class.
inline LazyKernel tight2() {
  auto k = LazyKernel::locally_finite("tight2", [](NodeId i) {
    if (i == 0) return std::vector<KernelArc>{{1, 0.0}};
    return std::vector<KernelArc>{{i - 1, -1.0 / static_cast<double>(i)}, {i + 1, 0.0}};
  });
  k.closed_forms.rho = 0.0;
  k.closed_forms.plus = [](NodeId i, NodeId j) {
    if (i > j) return -harmonic(j + 1, i);
    if (i == j) return -1.0 / static_cast<double>(i + 1);
    return 0.0;
  };
  k.closed_forms.eigenvector = [](Scalar lambda, NodeId) -> std::optional<Scalar> {
    if (lambda != 0.0) return std::nullopt;
    return 0.0;
  };
  k.closed_forms.martin = [](Scalar lambda, NodeId i, NodeId j) -> std::optional<Scalar> {
    if (lambda != 0.0) return std::nullopt;
    return i > j ? -harmonic(j + 1, i) : 0.0;
  };
  k.closed_forms.power = [](NodeId i, NodeId j, std::size_t n) -> std::optional<Scalar> {
    if (i != 0 || j != 0) return std::nullopt;
    if (n % 2 == 1) return zero;
    return -harmonic(1, n / 2);
  };
  return k;
}

/// Birth-death chain: i -> i+1 at p, i -> i-1 at q.
inline LazyKernel birth(double p, double q) {
  auto k = LazyKernel::locally_finite("birth", [p, q](NodeId i) {
    std::vector<KernelArc> row{{i + 1, p}};
    if (i > 0) row.push_back({i - 1, q});
    return row;
  });
  std::ostringstream ps;
  ps << "p=" << p << " q=" << q;
  k.parameters = ps.str();
  k.closed_forms.rho = (p + q) / 2.0;
  const double rho = (p + q) / 2.0;
  k.closed_forms.eigenvector = [p, rho](Scalar lambda, NodeId i) -> std::optional<Scalar> {
    if (lambda < rho) return std::nullopt;
    return static_cast<double>(i) * (lambda - p);
  };
  k.closed_forms.martin = [p, q, rho](Scalar lambda, NodeId i, NodeId j) -> std::optional<Scalar> {
    if (lambda < rho) return std::nullopt;
    const double di = static_cast<double>(i), dj = static_cast<double>(j);
    if (i <= j) return di * (lambda - p);
    return di * (lambda - p) + (di - dj) * (p + q - 2.0 * lambda);
  };
  return k;
}

inline double default_triangular_alpha(NodeId i) { return -1.0 / static_cast<double>(i + 1); }

/// Upper Hessenberg kernel: alpha_i on the diagonal, beta on the
/// subdiagonal and everywhere above. Rows are infinite.
inline LazyKernel triangular(double beta, std::function<double(NodeId)> alpha = default_triangular_alpha) {
  auto k = LazyKernel::with_infinite_rows("triangular", [beta, alpha](NodeId i, NodeId max_target) {
    std::vector<KernelArc> row;
    if (i > 0) row.push_back({i - 1, beta});
    if (i <= max_target) row.push_back({i, alpha(i)});
    for (NodeId j = i + 1; j <= max_target; ++j) row.push_back({j, beta});
    return row;
  });
  std::ostringstream ps;
  ps << "beta=" << beta;
  k.parameters = ps.str();
  k.closed_forms.rho = 0.0;
  k.closed_forms.martin = [beta](Scalar lambda, NodeId i, NodeId j) -> std::optional<Scalar> {
    if (lambda < 0.0) return std::nullopt;
    const double di = static_cast<double>(i), dj = static_cast<double>(j);
    if (i < j) return 0.0;
    if (j >= 1) return (beta - lambda) * (di - dj - 1.0);
    return (beta - lambda) * di;
  };
  return k;
}

/// Runs of -1 and -2 of lengths 1, 1, 2, 2, 3, 3, ... starting at n = 2.
inline double default_oscillating_alpha(std::size_t n) {
  std::size_t pos = n - 2, run = 0;
  while (true) {
    const std::size_t len = run / 2 + 1;
    if (pos < len) return run % 2 == 0 ? -1.0 : -2.0;
    pos -= len;
    ++run;
  }
}

/// A loop at 0, the 0 <-> 1 exchange at -1, a ladder from node 1 upward
/// with returns n -> 1 at alpha_n. (A^n)_11 = alpha_n for n >= 2.
inline LazyKernel oscillating(std::function<double(std::size_t)> alpha = default_oscillating_alpha) {
  auto k = LazyKernel::locally_finite("oscillating", [alpha](NodeId i) {
    if (i == 0) return std::vector<KernelArc>{{0, 0.0}, {1, -1.0}};
    if (i == 1) return std::vector<KernelArc>{{0, -1.0}, {2, 0.0}};
    return std::vector<KernelArc>{{i + 1, 0.0}, {1, alpha(i)}};
  });
  k.closed_forms.rho = 0.0;
  k.closed_forms.power = [alpha](NodeId i, NodeId j, std::size_t n) -> std::optional<Scalar> {
    if (i != 1 || j != 1 || n < 2) return std::nullopt;
    return alpha(n);
  };
  return k;
}

inline std::vector<std::string> names() {
  return {"ladder", "ladder-flat", "ladder-loops", "tight1", "tight2", "birth", "triangular", "oscillating"};
}

/// Builds a catalog kernel from "name key=value ...".
inline LazyKernel from_spec(const std::string& spec) {
  std::istringstream ss(spec);
  std::string name, tok;
  ss >> name;
  std::map<std::string, double> params;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error("kernel parameter '" + tok + "' is not key=value");
    char* end = nullptr;
    const std::string val = tok.substr(eq + 1);
    const double v = std::strtod(val.c_str(), &end);
    if (end == val.c_str() || *end != '\0') throw Error("kernel parameter '" + tok + "' has a bad value");
    params[tok.substr(0, eq)] = v;
  }
  auto take = [&](const std::string& key, double dflt) {
    const auto it = params.find(key);
    if (it == params.end()) return dflt;
    const double v = it->second;
    params.erase(it);
    return v;
  };
  LazyKernel k;
  if (name == "ladder") k = ladder();
  else if (name == "ladder-flat") k = ladder_flat();
  else if (name == "ladder-loops") k = ladder_loops();
  else if (name == "tight1") k = tight1();
  else if (name == "tight2") k = tight2();
  else if (name == "birth") k = birth(take("p", -1.0), take("q", -3.0));
  else if (name == "triangular") k = triangular(take("beta", -1.0));
  else if (name == "oscillating") k = oscillating();
  else throw Error("unknown kernel '" + name + "'");
  if (!params.empty()) throw Error("unknown parameter '" + params.begin()->first + "' for kernel " + name);
  return k;
}

}  // namespace kernels

inline std::vector<LazyKernel> catalog() {
  return {kernels::ladder(), kernels::ladder_flat(), kernels::ladder_loops(), kernels::tight1(),
          kernels::tight2(), kernels::birth(-1.0, -3.0), kernels::triangular(-1.0), kernels::oscillating()};
}

}  // namespace maxplus
