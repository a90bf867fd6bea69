#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace maxplus {

// Elements of the (completed) max-plus semiring are plain doubles:
// -inf is the semiring zero, 0.0 the unit, +inf only appears in closures
// that diverge.
using Scalar = double;
using NodeId = std::size_t;

inline constexpr Scalar zero = -std::numeric_limits<double>::infinity();
inline constexpr Scalar unit = 0.0;
inline constexpr Scalar top = std::numeric_limits<double>::infinity();

constexpr bool is_zero(Scalar a) noexcept { return a == zero; }
constexpr bool is_top(Scalar a) noexcept { return a == top; }
inline bool is_finite(Scalar a) noexcept { return std::isfinite(a); }

constexpr Scalar oplus(Scalar a, Scalar b) noexcept { return a < b ? b : a; }

// Zero is absorbing, including against +inf.
constexpr Scalar otimes(Scalar a, Scalar b) noexcept {
  if (a == zero || b == zero) return zero;
  return a + b;
}

// Residual a / b in the max-plus sense (a - b), with the conventions used
// by residuation: 0-bar / x = 0-bar for finite x, and x / 0-bar = +inf.
constexpr Scalar odiv(Scalar a, Scalar b) noexcept {
  if (b == zero) return top;
  if (a == zero) return zero;
  return a - b;
}

struct Tolerance {
  double eps = 1e-9;

  // Equality for derived quantities. Infinities only match themselves.
  bool eq(Scalar a, Scalar b) const noexcept {
    if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
    return std::fabs(a - b) <= eps;
  }
  bool le(Scalar a, Scalar b) const noexcept {
    if (a == zero || b == top) return true;
    if (!std::isfinite(a) || !std::isfinite(b)) return a <= b;
    return a <= b + eps;
  }
  bool lt(Scalar a, Scalar b) const noexcept { return !le(b, a); }

  // A decision taken against `boundary` is marginal when the tested value
  // is not exactly on it but lies within 10 eps of it.
  bool marginal(Scalar a, Scalar boundary) const noexcept {
    if (!std::isfinite(a) || !std::isfinite(boundary)) return false;
    const double d = std::fabs(a - boundary);
    return d != 0.0 && d <= 10.0 * eps;
  }
};

}  // namespace maxplus
