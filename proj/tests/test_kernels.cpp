#include <gtest/gtest.h>

#include "maxplus/maxplus.hpp"

using namespace maxplus;

namespace {

constexpr Scalar Z = zero;

std::vector<NodeId> range(NodeId from, NodeId to) {
  std::vector<NodeId> out;
  for (NodeId v = from; v <= to; ++v) out.push_back(v);
  return out;
}

}  // namespace

TEST(Catalog, ContentsAndRows) {
  const auto cat = catalog();
  ASSERT_EQ(cat.size(), 8u);
  const auto names = kernels::names();
  for (std::size_t k = 0; k < cat.size(); ++k) EXPECT_EQ(cat[k].name, names[k]);

  EXPECT_EQ(kernels::tight1().row_arcs(0), (std::vector<KernelArc>{{0, 0.0}, {1, 0.0}}));
  EXPECT_EQ(kernels::ladder_flat().row_arcs(5), (std::vector<KernelArc>{{6, 0.0}, {0, -1.0}}));
  EXPECT_EQ(kernels::ladder().row_arcs(4), (std::vector<KernelArc>{{5, 0.0}, {0, -0.25}}));
  EXPECT_EQ(kernels::ladder_loops().row_arcs(2), (std::vector<KernelArc>{{2, 0.0}, {3, 0.0}, {0, -0.5}}));
  EXPECT_EQ(kernels::tight2().row_arcs(4), (std::vector<KernelArc>{{3, -0.25}, {5, 0.0}}));
  EXPECT_FALSE(kernels::triangular(-1).right_locally_finite());
  EXPECT_THROW(kernels::triangular(-1).row_arcs(0), Error);
}

TEST(Catalog, FromSpec) {
  const auto b = kernels::from_spec("birth p=-2 q=-4");
  EXPECT_EQ(b.row_arcs(3), (std::vector<KernelArc>{{4, -2.0}, {2, -4.0}}));
  EXPECT_EQ(*b.closed_forms.rho, -3.0);
  EXPECT_EQ(kernels::from_spec("birth").row_arcs(1), (std::vector<KernelArc>{{2, -1.0}, {0, -3.0}}));
  EXPECT_EQ(kernels::from_spec("tight2").name, "tight2");
  EXPECT_THROW(kernels::from_spec("nope"), Error);
  EXPECT_THROW(kernels::from_spec("birth r=1"), Error);
  EXPECT_THROW(kernels::from_spec("birth p=x"), Error);
  EXPECT_THROW(kernels::from_spec("tight1 p"), Error);
}

TEST(Truncate, Examples) {
  const auto b = truncate(kernels::birth(-1, -3), 3);
  EXPECT_EQ(b.matrix.size(), 4u);
  EXPECT_EQ(b.dropped_arcs, std::optional<std::size_t>(1));
  EXPECT_EQ(b.matrix, Matrix::from_rows({{Z, -1, Z, Z}, {-3, Z, -1, Z}, {Z, -3, Z, -1}, {Z, Z, -3, Z}}));
  EXPECT_EQ(b.interior_rows(), (NodeSet{1, 2}));

  const auto t = truncate(kernels::tight1(), 0);
  EXPECT_EQ(t.matrix, Matrix::from_rows({{0}}));
  EXPECT_EQ(t.dropped_arcs, std::optional<std::size_t>(1));

  const auto tri = truncate(kernels::triangular(-1), 4);
  EXPECT_FALSE(tri.dropped_arcs.has_value());
  EXPECT_EQ(tri.matrix(3, 0), Z);
  EXPECT_EQ(tri.matrix(3, 1), Z);
  EXPECT_EQ(tri.matrix(3, 2), -1);
  EXPECT_EQ(tri.matrix(3, 3), -0.25);
  EXPECT_EQ(tri.matrix(3, 4), -1);
  EXPECT_EQ(tri.matrix(0, 4), -1);
  EXPECT_EQ(tri.interior_rows(), (NodeSet{1, 2, 3}));
}

TEST(Truncate, WindowStarIsMonotoneInWindowSize) {
  const std::vector<std::size_t> windows{3, 6, 12, 24, 48};
  for (const auto& k : catalog()) {
    std::vector<ExtMatrix> stars;
    for (std::size_t N : windows) stars.push_back(kleene_star(truncate(k, N).matrix).star);
    for (std::size_t w = 1; w < windows.size(); ++w)
      for (NodeId i = 0; i <= windows[w - 1]; ++i)
        for (NodeId j = 0; j <= windows[w - 1]; ++j)
          EXPECT_LE(stars[w - 1](i, j), stars[w](i, j) + 1e-12) << k.name << " " << i << "," << j;
  }
}

TEST(WindowStar, ClosedFormLimits) {
  const auto t1 = window_star_limit(kernels::tight1(), 7, 3, {7, 8, 20});
  for (const auto& s : t1) {
    EXPECT_EQ(s.star, -4);
    ASSERT_TRUE(s.oracle.has_value());
    EXPECT_EQ(*s.oracle, -4);
  }
  const double want = -(1.0 / 3 + 1.0 / 4 + 1.0 / 5);
  for (const auto& s : window_star_limit(kernels::tight2(), 5, 2, {6, 10, 40})) {
    EXPECT_NEAR(s.star, want, 1e-9);
    EXPECT_NEAR(*s.oracle, want, 1e-12);
  }
  EXPECT_THROW(window_star_limit(kernels::tight1(), 7, 3, {5}), DimensionError);
}

TEST(WindowStar, LadderApproachesUnitLikeOneOverN) {
  // Returning to 0 is cheapest from the top of the window.
  for (std::size_t N : {4, 10, 50, 200}) {
    const auto c = kleene_star(truncate(kernels::ladder(), N).matrix);
    for (NodeId i = 0; i <= 3; ++i)
      for (NodeId j = 0; j <= 3; ++j) EXPECT_NEAR(c.plus(i, j), i < j ? 0.0 : -1.0 / N, 1e-12) << N;
  }
}

TEST(WindowStar, CatalogPlusOraclesHoldPastThreshold) {
  // Thresholds: tight1 and ladder-flat are exact on every window holding
  // i and j; tight2 needs one row above max(i, j).
  for (const char* name : {"tight1", "ladder-flat", "tight2"}) {
    const auto k = kernels::from_spec(name);
    const std::size_t N = 30;
    const auto c = kleene_star(truncate(k, N).matrix);
    for (NodeId i = 0; i < N; ++i)
      for (NodeId j = 0; j < N; ++j) EXPECT_NEAR(c.plus(i, j), k.closed_forms.plus(i, j), 1e-9) << name;
  }
}

TEST(WindowStar, LoopsMakeEverySingletonCritical) {
  const auto s = spectral_summary(truncate(kernels::ladder_loops(), 9).matrix);
  EXPECT_EQ(s.critical_classes.size(), 10u);
  EXPECT_EQ(s.rho, 0);
  EXPECT_TRUE(spectral_summary(truncate(kernels::ladder_flat(), 9).matrix).rho < 0);
}

TEST(Birth, WindowRhoIsExact) {
  for (std::size_t N = 1; N <= 40; ++N) EXPECT_EQ(max_cycle_mean(truncate(kernels::birth(-1, -3), N).matrix), -2.0);
}

TEST(Birth, LinearVectorOnInteriorRowsOfEveryWindow) {
  const auto k = kernels::birth(-1, -3);
  for (std::size_t N : {2, 5, 17, 40})
    for (double lambda : {-2.0, -1.0, 0.0, 1.5}) {
      const Window w = truncate(k, N);
      Vector u(N + 1);
      for (NodeId i = 0; i <= N; ++i) u[i] = *k.closed_forms.eigenvector(lambda, i);
      EXPECT_TRUE(check_eigen(w.matrix, lambda, u, {}, w.interior_rows()).pass) << N << " " << lambda;
    }
  EXPECT_FALSE(k.closed_forms.eigenvector(-2.5, 3).has_value());
}

TEST(Oscillating, DiagonalPowerFollowsAlpha) {
  const auto k = kernels::oscillating();
  const Matrix w = truncate(k, 60).matrix;
  const auto tr = power_trace(w, 1, 1, 50, false);
  const std::vector<double> head{-1, -2, -1, -1, -2, -2, -1, -1, -1, -2, -2, -2};
  for (std::size_t n = 2; n < 2 + head.size(); ++n) EXPECT_EQ(kernels::default_oscillating_alpha(n), head[n - 2]);
  for (std::size_t n = 2; n <= 50; ++n) EXPECT_EQ(tr.at(n), *k.closed_forms.power(1, 1, n)) << n;
}

TEST(Tight2, PowerClosedForm) {
  const auto k = kernels::tight2();
  const auto tr = power_trace(truncate(k, 40).matrix, 0, 0, 60, false);
  for (std::size_t n = 1; n <= 60; ++n) {
    const Scalar want = *k.closed_forms.power(0, 0, n);
    if (want == Z)
      EXPECT_EQ(tr.at(n), Z);
    else
      EXPECT_NEAR(tr.at(n), want, 1e-9);
  }
}

TEST(PropertyT, Tight1LevelSet) {
  for (std::size_t N = 5; N <= 30; ++N) {
    const auto r = property_T_probe(kernels::tight1(), 0, 0, -3, N);
    EXPECT_EQ(r.level_set, (NodeSet{0, 1, 2, 3}));
    EXPECT_FALSE(r.saturated);
  }
  EXPECT_TRUE(property_T_probe(kernels::tight1(), 0, 0, -3, 3).saturated);
}

TEST(PropertyT, LadderSaturatesOnEveryWindow) {
  for (std::size_t N = 2; N <= 60; ++N) {
    const auto r = property_T_probe(kernels::ladder(), 0, 0, -0.5, N);
    EXPECT_TRUE(r.saturated) << N;
    EXPECT_EQ(r.level_set.size(), N + 1);
  }
}

TEST(PropertyT, Tight2LevelSetIsFinite) {
  for (std::size_t N = 3; N <= 40; ++N) {
    const auto r = property_T_probe(kernels::tight2(), 0, 0, -1, N);
    EXPECT_EQ(r.level_set, (NodeSet{0, 1}));
    EXPECT_FALSE(r.saturated);
  }
  EXPECT_THROW(property_T_probe(kernels::tight2(), 9, 0, -1, 5), DimensionError);
}

TEST(Martin, BirthDeathClosedForm) {
  const auto k = kernels::birth(-1, -3);
  for (double lambda : {-2.0, -1.0, 0.0}) {
    const auto mk = martin_kernel(k, lambda, 0, 60);
    for (NodeId i = 0; i <= 30; ++i)
      for (NodeId j = 0; j <= 30; ++j) EXPECT_NEAR(mk.K(i, j), *k.closed_forms.martin(lambda, i, j), 1e-9);
  }
}

TEST(Martin, TriangularClosedForm) {
  const auto k = kernels::triangular(-1);
  for (double lambda : {0.0, 0.5, 2.0}) {
    const auto mk = martin_kernel(k, lambda, 0, 40);
    for (NodeId i = 0; i <= 20; ++i)
      for (NodeId j = 0; j <= 20; ++j) EXPECT_NEAR(mk.K(i, j), *k.closed_forms.martin(lambda, i, j), 1e-9);
  }
}

TEST(Martin, Tight1AndTight2ClosedForms) {
  for (const auto& k : {kernels::tight1(), kernels::tight2()}) {
    const auto mk = martin_kernel(k, 0.0, 0, 40);
    for (NodeId i = 0; i < 40; ++i)
      for (NodeId j = 0; j < 40; ++j) EXPECT_NEAR(mk.K(i, j), *k.closed_forms.martin(0.0, i, j), 1e-9) << k.name;
  }
}

TEST(Martin, BoundHoldsOnEveryWindowEntry) {
  const std::vector<std::pair<LazyKernel, double>> cases{
      {kernels::birth(-1, -3), -2.0}, {kernels::birth(-1, -3), 0.5}, {kernels::tight1(), 0.0},
      {kernels::tight2(), 0.0},       {kernels::triangular(-1), 0.0}, {kernels::ladder(), 0.0}};
  for (const auto& [k, lambda] : cases) {
    const auto mk = martin_kernel(k, lambda, 0, 25);
    for (NodeId i = 0; i <= 25; ++i)
      for (NodeId j = 0; j <= 25; ++j) EXPECT_LE(mk.K(i, j) + mk.pi[i], 1e-9) << k.name;
  }
}

TEST(Martin, Errors) {
  EXPECT_THROW(martin_kernel(kernels::birth(-1, -3), -2.5, 0, 10), Error);
  // Node 1 cannot reach node 0: nothing comes back from above.
  const auto up_only = LazyKernel::locally_finite("up", [](NodeId i) { return std::vector<KernelArc>{{i + 1, 0.0}}; });
  EXPECT_THROW(martin_kernel(up_only, 0.0, 1, 5), UnreachableBasepointError);
  EXPECT_THROW(martin_kernel(kernels::tight1(), 0.0, 9, 5), DimensionError);
}

TEST(Boundary, Tight2ColumnIsTheUnitVectorAndAnEigenvector) {
  const auto mk = martin_kernel(kernels::tight2(), 0.0, 0, 80);
  const auto u = boundary_column(mk, 30, range(60, 80));
  ASSERT_TRUE(u.has_value());
  for (Scalar x : *u) EXPECT_NEAR(x, 0.0, 1e-12);
  const Window w = truncate(kernels::tight2(), 29);
  EXPECT_TRUE(check_eigen(w.matrix, 0.0, *u, {}, w.interior_rows()).pass);
}

TEST(Boundary, BirthDeathColumnIsLinear) {
  const auto k = kernels::birth(-1, -3);
  for (double lambda : {-2.0, -1.0, 0.0}) {
    for (NodeId i : {0, 3, 10}) {
      const auto p = boundary_column_probe(k, lambda, 0, i, range(40, 60), 60);
      ASSERT_TRUE(p.stabilized);
      EXPECT_NEAR(p.limit, i * (lambda + 1.0), 1e-9);
    }
  }
  EXPECT_THROW(boundary_column_probe(k, -2.0, 0, 0, {5, 3}, 60), Error);
  EXPECT_THROW(boundary_column_probe(k, -2.0, 0, 0, {5, 70}, 60), Error);
}

TEST(Boundary, TriangularColumnIsUnitButNotAnEigenvector) {
  const auto k = kernels::triangular(-1);
  for (double lambda : {0.0, 0.5, 3.0}) {
    const auto mk = martin_kernel(k, lambda, 0, 60);
    const auto u = boundary_column(mk, 30, range(40, 60));
    ASSERT_TRUE(u.has_value());
    for (Scalar x : *u) EXPECT_NEAR(x, 0.0, 1e-12);
    const Window w = truncate(k, 29);
    EXPECT_FALSE(check_eigen(w.matrix, lambda, *u, {}, w.interior_rows()).pass) << lambda;
  }
}

TEST(Boundary, UnstableSequenceIsNotAccepted) {
  // K_{i,j} for i > j still moves with j.
  const auto mk = martin_kernel(kernels::birth(-1, -3), -1.0, 0, 30);
  EXPECT_FALSE(boundary_column_probe(mk, 20, {5, 6, 7}).stabilized);
}
