#include <gtest/gtest.h>

#include <random>

#include "maxplus/maxplus.hpp"
#include "oracles.hpp"

using namespace maxplus;

namespace {

constexpr Scalar Z = zero;

// Star by summing oracle powers of a matrix whose circuits are all <= 0.
Matrix star_by_powers(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix sum = Matrix::identity(n), pw = Matrix::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    pw = oracle::mul(pw, a);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j) sum.set(i, j, std::max(sum(i, j), pw(i, j)));
  }
  return sum;
}

Vector combine(const std::vector<Vector>& cols, const std::vector<Scalar>& coef) {
  Vector u(cols.front().size(), Z);
  for (std::size_t c = 0; c < cols.size(); ++c) u = vec_oplus(u, vec_scale(coef[c], cols[c]));
  return u;
}

bool full_support(const Vector& u) {
  return std::all_of(u.begin(), u.end(), [](Scalar x) { return std::isfinite(x); });
}

}  // namespace

TEST(EigenBasis, Examples) {
  const auto single = principal_eigenbasis(Matrix::from_rows({{0}}));
  ASSERT_EQ(single.columns.size(), 1u);
  EXPECT_EQ(single.columns[0], (Vector{0}));

  const Matrix bw = truncate(kernels::birth(-1, -3), 10).matrix;
  const auto b = principal_eigenbasis(bw);
  ASSERT_EQ(b.columns.size(), 1u);
  EXPECT_EQ(b.representatives[0], 0u);
  const Matrix st = star_by_powers(bw.shifted(-oracle::circuit_facts(bw).rho));
  EXPECT_EQ(b.columns[0], st.column(0));
  for (NodeId k = 0; k < bw.size(); ++k) EXPECT_EQ(b.columns[0][k], -static_cast<double>(k));

  const std::size_t N = 15;
  const auto t1 = principal_eigenbasis(truncate(kernels::tight1(), N).matrix);
  ASSERT_EQ(t1.columns.size(), 1u);
  for (NodeId i = 0; i <= N; ++i) EXPECT_EQ(t1.columns[0][i], -static_cast<double>(i));

  EXPECT_THROW(principal_eigenbasis(Matrix(3)), AcyclicError);
}

TEST(EigenBasis, OneColumnPerCriticalClassAndEachIsEigen) {
  std::mt19937_64 rng(201);
  for (int t = 0; t < 600; ++t) {
    const std::size_t n = 1 + t % 8;
    const Matrix a = oracle::random_matrix(rng, n, 0.35, -5, 5);
    if (max_cycle_mean(a) == Z) continue;
    const auto b = principal_eigenbasis(a);
    EXPECT_EQ(b.columns.size(), spectral_summary(a).critical_classes.size());
    for (std::size_t c = 0; c < b.columns.size(); ++c) {
      EXPECT_EQ(b.representatives[c], b.classes[b.class_of[c]].front());
      EXPECT_TRUE(check_eigen(a, b.lambda, b.columns[c]).pass);
      for (std::size_t d = c + 1; d < b.columns.size(); ++d)
        EXPECT_FALSE(approx_equal(normalize_vector(b.columns[c]), normalize_vector(b.columns[d])));
      // Dropping a column loses that column.
      std::vector<Vector> rest;
      for (std::size_t d = 0; d < b.columns.size(); ++d)
        if (d != c) rest.push_back(b.columns[d]);
      EXPECT_FALSE(approx_equal(residuated_span(b.columns[c], rest), b.columns[c]));
    }
  }
}

TEST(CheckEigen, BirthDeathLinearVectorHoldsOnInteriorRows) {
  const double p = -1, q = -3;
  const std::size_t N = 20;
  const Matrix w = truncate(kernels::birth(p, q), N).matrix;
  NodeSet interior;
  for (NodeId i = 0; i < N; ++i) interior.push_back(i);
  for (double lambda : {-2.0, -1.5, 0.0, 3.25}) {
    Vector u(N + 1);
    for (NodeId k = 0; k <= N; ++k) u[k] = static_cast<double>(k) * (lambda - p);
    EXPECT_TRUE(check_eigen(w, lambda, u, {}, interior).pass) << lambda;
    // The last row lost its upward arc; it only balances at the critical value.
    EXPECT_EQ(check_eigen(w, lambda, u).pass, lambda == (p + q) / 2) << lambda;
  }
}

TEST(CheckEigen, PerturbedColumnFailsWithDirectResidual) {
  std::mt19937_64 rng(203);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + t % 6;
    const Matrix a = oracle::random_irreducible(rng, n, 0.5, -5, 5);
    const auto b = principal_eigenbasis(a);
    if (b.columns.size() != 1) continue;  // eigenvector unique up to scaling
    Vector u = b.columns[0];
    u[t % n] += 1.0;
    const auto rep = check_eigen(a, b.lambda, u);
    EXPECT_FALSE(rep.pass);
    const Vector au = oracle::mul(a, u);
    double residual = 0;
    for (NodeId i = 0; i < n; ++i) residual = std::max(residual, std::fabs(au[i] - (b.lambda + u[i])));
    EXPECT_NEAR(rep.residual, residual, 1e-12);
  }
}

TEST(CheckEigen, ZeroSideMismatchIsReported) {
  const Matrix a = Matrix::from_rows({{0, Z}, {Z, Z}});
  const auto rep = check_eigen(a, 0, Vector{0, 0});
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.exact_zero_mismatch, (NodeSet{1}));
  EXPECT_THROW(check_eigen(a, 0, Vector{Z, Z}), ZeroVectorError);
  EXPECT_THROW(check_super_eigen(a, 0, Vector{Z, Z}), ZeroVectorError);
}

TEST(CheckSuperEigen, Examples) {
  const Matrix a = Matrix::from_rows({{-1, 0}, {-3, -2}});
  EXPECT_TRUE(check_super_eigen(a, 0, Vector{0, 0}).pass);
  const Scalar rho = max_cycle_mean(a);
  EXPECT_FALSE(check_super_eigen(a, rho - 0.5, Vector{0, 0}).pass);
  EXPECT_FALSE(check_super_eigen(a, rho - 0.5, Vector{4, -1}).pass);
}

TEST(CheckSuperEigen, BelowRhoAlwaysFailsForFullSupport) {
  std::mt19937_64 rng(207);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 7;
    const Matrix a = oracle::random_irreducible(rng, n, 0.4, -6, 6);
    const Vector u = oracle::random_vector(rng, n, -20, 20);
    EXPECT_FALSE(check_super_eigen(a, max_cycle_mean(a) - 0.25, u).pass);
  }
}

TEST(ColumnTest, ShiftedStarColumnIsEigenExactlyAtRhoOnRecurrentNodes) {
  std::mt19937_64 rng(209);
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = 1 + t % 7;
    const Matrix a = oracle::random_irreducible(rng, n, 0.4, -6, 6);
    const Scalar rho = max_cycle_mean(a);
    const NodeSet rec = recurrent_nodes(a);
    for (double extra : {0.0, 0.5, 2.0}) {
      const auto star = kleene_star(a.shifted(-(rho + extra))).star;
      for (NodeId i = 0; i < n; ++i) {
        const bool recurrent = std::find(rec.begin(), rec.end(), i) != rec.end();
        EXPECT_EQ(check_eigen(a, rho + extra, star.column(i)).pass, extra == 0.0 && recurrent);
      }
    }
  }
}

TEST(ColumnTest, FullSupportEigenvectorForcesLambdaAtLeastRho) {
  std::mt19937_64 rng(211);
  for (int t = 0; t < 300; ++t) {
    const Matrix a = oracle::random_irreducible(rng, 1 + t % 7, 0.4, -6, 6);
    const auto b = principal_eigenbasis(a);
    for (const Vector& u : b.columns) {
      if (!full_support(u)) continue;
      if (check_eigen(a, b.lambda, u).pass) EXPECT_GE(b.lambda, max_cycle_mean(a) - 1e-9);
    }
  }
}

TEST(Decompose, SingleColumnRoundTrips) {
  const Matrix bw = truncate(kernels::birth(-1, -3), 12).matrix;
  const auto col = principal_eigenbasis(bw).columns[0];
  const auto exact = decompose(bw, col);
  EXPECT_EQ(exact.residual, 0.0);
  EXPECT_EQ(exact.reconstruction, col);

  // Rational means leave rounding noise in the closure.
  std::mt19937_64 rng(213);
  for (int t = 0; t < 200; ++t) {
    const Matrix a = oracle::random_irreducible(rng, 1 + t % 7, 0.4, -6, 6);
    const auto b = principal_eigenbasis(a);
    const auto d = decompose(a, b.columns[0]);
    EXPECT_LE(d.residual, 1e-12);
    EXPECT_TRUE(approx_equal(d.reconstruction, b.columns[0], Tolerance{1e-12}));
  }
}

TEST(Decompose, TwoColumnCombinationRoundTrips) {
  // Two disjoint critical loops joined by non-critical arcs.
  const Matrix a = Matrix::from_rows({{0, -2, Z}, {-1, 0, -3}, {-4, Z, -1}});
  const auto b = principal_eigenbasis(a);
  ASSERT_EQ(b.columns.size(), 2u);
  const Vector u = combine(b.columns, {1.5, -0.75});
  ASSERT_TRUE(check_eigen(a, b.lambda, u).pass);
  const auto d = decompose(a, u);
  EXPECT_LE(d.residual, 1e-9);
  EXPECT_EQ(d.coefficients.size(), 2u);
}

TEST(Decompose, SpanningOnRandomFiniteMatrices) {
  std::mt19937_64 rng(217);
  std::uniform_real_distribution<double> coef(-6, 6);
  std::bernoulli_distribution skip(0.3);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 8;
    const Matrix a = t % 2 ? oracle::random_irreducible(rng, n, 0.35, -6, 6) : oracle::random_matrix(rng, n, 0.35, -6, 6);
    if (max_cycle_mean(a) == Z) continue;
    const auto nc = normalized_closure(a);
    std::vector<Vector> cols;
    std::vector<Scalar> c;
    for (NodeId j : recurrent_nodes(nc)) {
      cols.push_back(nc.closure.star.column(j));
      c.push_back(skip(rng) ? Z : coef(rng));
    }
    const Vector u = combine(cols, c);
    if (is_zero_vector(u)) continue;
    ASSERT_TRUE(check_eigen(a, nc.rho, u).pass);
    EXPECT_LE(decompose(a, u).residual, 1e-9) << t;
  }
}

TEST(Decompose, RejectsNonEigenvector) {
  const Matrix a = Matrix::from_rows({{0, -1}, {-1, -2}});
  EXPECT_THROW(decompose(a, Vector{0, 5}), NotEigenvectorError);
}

TEST(Extremal, BasisColumnsAreExtremal) {
  std::mt19937_64 rng(219);
  for (int t = 0; t < 300; ++t) {
    const Matrix a = oracle::random_matrix(rng, 1 + t % 7, 0.35, -5, 5);
    if (max_cycle_mean(a) == Z) continue;
    const auto b = principal_eigenbasis(a);
    for (const Vector& u : b.columns) EXPECT_TRUE(is_extremal(u, b.columns));
  }
}

TEST(Extremal, JoinOfTwoIsNotExtremal) {
  const Vector b1{0, -1, -4}, b2{-3, 0, -1};
  const Vector j = vec_oplus(b1, b2);
  EXPECT_FALSE(is_extremal(j, {b1, b2, j}));
  EXPECT_TRUE(is_extremal(b1, {b1, b2, j}));
  EXPECT_THROW(is_extremal(Vector{Z, Z}, {b1}), ZeroVectorError);
}

TEST(Extremal, AgreesWithExhaustiveJoinSearch) {
  std::mt19937_64 rng(223);
  std::uniform_int_distribution<int> w(-4, 4);
  std::bernoulli_distribution hole(0.2);
  auto draw = [&](std::size_t n) {
    Vector v(n);
    for (auto& x : v) x = hole(rng) ? Z : w(rng);
    if (is_zero_vector(v)) v[0] = 0;
    return v;
  };
  for (int t = 0; t < 1500; ++t) {
    const std::size_t n = 1 + t % 6;
    std::vector<Vector> family;
    for (std::size_t m = 0; m < 1 + t % 4; ++m) family.push_back(draw(n));
    Vector u = draw(n);
    if (t % 3 == 0) u = vec_oplus(vec_scale(w(rng), family[0]), vec_scale(w(rng), family.back()));
    const Vector un = normalize_vector(u);
    std::vector<Vector> others;
    for (const Vector& v : family)
      if (normalize_vector(v) != un) others.push_back(v);
    EXPECT_EQ(is_extremal(u, family), !oracle::is_join_of(u, others)) << t;
  }
}

TEST(Proportionality, Examples) {
  const Matrix bw = truncate(kernels::birth(-1, -3), 8).matrix;
  const auto nc = normalized_closure(bw);
  const Vector c0 = nc.closure.star.column(0), c5 = nc.closure.star.column(5);
  for (const auto& r : restriction_proportionality_check(bw, c0, c0)) {
    EXPECT_TRUE(r.proportional);
    EXPECT_EQ(r.constant, 0);
  }
  const auto res = restriction_proportionality_check(bw, c0, c5);
  ASSERT_EQ(res.size(), 1u);
  EXPECT_TRUE(res[0].proportional);
  EXPECT_NEAR(res[0].constant, nc.closure.star(5, 0), 1e-12);
  EXPECT_THROW(restriction_proportionality_check(bw, Vector(9, 0.0), c0), NotSuperEigenvectorError);
}

TEST(Proportionality, ColumnsWithinARecurrenceClassDifferByAStarEntry) {
  std::mt19937_64 rng(227);
  for (int t = 0; t < 500; ++t) {
    const Matrix a = oracle::random_matrix(rng, 1 + t % 8, 0.35, -5, 5);
    if (max_cycle_mean(a) == Z) continue;
    const auto nc = normalized_closure(a);
    const auto& st = nc.closure.star;
    for (const auto& cls : recurrence_classes(nc))
      for (NodeId i : cls)
        for (NodeId j : cls) EXPECT_TRUE(approx_equal(st.column(i), vec_scale(st(j, i), st.column(j))));
  }
}

TEST(SuperEigenProperties, ProportionalityAndMinimumPrinciple) {
  std::mt19937_64 rng(229);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 7;
    const Matrix a = t % 3 ? oracle::random_irreducible(rng, n, 0.4, -6, 6) : oracle::random_matrix(rng, n, 0.4, -6, 6);
    if (max_cycle_mean(a) == Z) continue;
    const auto nc = normalized_closure(a);
    Matrix st(nc.closure.star);
    const Vector v = mat_vec(st, oracle::random_vector(rng, n, -10, 10));
    const Vector w = mat_vec(st, oracle::random_vector(rng, n, -10, 10));
    ASSERT_TRUE(check_super_eigen(a, nc.rho, v).pass);
    for (const auto& r : restriction_proportionality_check(a, v, w)) EXPECT_TRUE(r.proportional) << t;
    for (const auto& e : minimum_principle_check(a, v)) EXPECT_TRUE(e.equal) << t;
  }
}

TEST(MinimumPrinciple, BasisColumnAndPrecondition) {
  const Matrix a = Matrix::from_rows({{0, -2}, {-1, -3}});
  const auto b = principal_eigenbasis(a);
  for (const auto& e : minimum_principle_check(a, b.columns[0])) EXPECT_TRUE(e.equal);
  EXPECT_THROW(minimum_principle_check(a, Vector{-5, 0}), NotSuperEigenvectorError);
}

TEST(NormalizeVector, MaxFiniteEntryBecomesZero) {
  EXPECT_EQ(normalize_vector(Vector{3, Z, 1}), (Vector{0, Z, -2}));
  EXPECT_EQ(normalize_vector(Vector{Z, Z}), (Vector{Z, Z}));
}
