#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "etlab/catalog.hpp"

namespace etlab {
namespace {

std::vector<double> interior_point(const Box& box, double t = 0.37) {
  std::vector<double> p;
  for (auto [lo, hi] : box.intervals) p.push_back(lo + t * (hi - lo));
  return p;
}

TEST(Example1Profile, ClosedFormInDimensionFour) {
  // n = 4: t(r) = integral_1^r dr / sqrt(1 - r^-2) = sqrt(r^2 - 1)
  const auto pr = example1_profile(4, 2.0);
  EXPECT_NEAR(pr.t, std::sqrt(3.0), 1e-9);
  EXPECT_DOUBLE_EQ(pr.f, 2.0);
  EXPECT_NEAR(pr.f_prime, std::sqrt(3.0) / 2.0, 1e-15);
  for (double r : {1.01, 1.5, 3.0, 7.0})
    EXPECT_NEAR(example1_profile(4, r).t, std::sqrt(r * r - 1.0), 1e-9) << r;
}

TEST(Example1Profile, DerivativeOfArcLength) {
  Rng rng = make_rng(41, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial % 3;
    const double r = uniform(rng, 1.2, 5.0);
    const double h = 1e-4;
    const double dt = (example1_profile(n, r + h).t - example1_profile(n, r - h).t) / (2 * h);
    const double expected = 1.0 / std::sqrt(1.0 - std::pow(r, 2.0 - n));
    EXPECT_NEAR(dt, expected, 1e-6 * expected) << "n=" << n << " r=" << r;
    EXPECT_NEAR(example1_profile(n, r).f_prime, 1.0 / expected, 1e-14);
  }
}

TEST(Example1Profile, RejectsHorizonAndBelow) {
  EXPECT_THROW(example1_profile(4, 1.0), DomainError);
  EXPECT_THROW(example1_profile(5, 0.5), DomainError);
  EXPECT_NEAR(example1_profile(5, 1.0 + 1e-12).t, 0.0, 1e-5);
}

TEST(Example1Profile, MatchesChartRadialFactor) {
  const auto cs = make_example1(5);
  const double p[] = {2.3, 0.1, 0.2, -0.3, 0.1};
  const MetricValue m = cs.structure.chart.metric_at(p);
  EXPECT_NEAR(1.0 / std::sqrt(m.g(0, 0)), example1_profile(5, 2.3).f_prime, 1e-14);
}

TEST(Catalog, EntriesBuildWithDefaults) {
  std::set<std::string> seen;
  for (const auto& info : catalog_entries()) {
    const auto cs = make_catalog_structure(info.name);
    EXPECT_EQ(cs.name, info.name);
    EXPECT_FALSE(cs.default_suites.empty());
    seen.insert(info.name);
    const auto p = interior_point(cs.structure.chart.domain());
    EXPECT_TRUE(cs.structure.chart.domain().contains(p));
    const StructurePoint sp(cs.structure, p, 4);
    if (cs.solution) {
      EXPECT_LT(residual_principal(sp).relative(), 1e-10) << info.name;
    } else {
      EXPECT_GT(residual_principal(sp).relative(), 1e-4) << info.name;
    }
  }
  for (const char* name : {"flat_linear", "sphere_height", "cpe_sphere", "schwarzschild_slice",
                           "example1", "miao_tam_ball", "warped_generic",
                           "warped_sphere_product", "curzon_product"})
    EXPECT_TRUE(seen.count(name)) << name;
}

TEST(Catalog, ParameterValidation) {
  EXPECT_THROW(make_catalog_structure("no_such_entry"), ConfigError);
  EXPECT_THROW(make_catalog_structure("example1", {{"radius", 2.0}}), ConfigError);
  EXPECT_THROW(make_catalog_structure("example1", {{"n", 9}}), ConfigError);
  EXPECT_THROW(make_catalog_structure("example1", {{"n", 4.5}}), ConfigError);
  EXPECT_THROW(make_catalog_structure("sphere_height", {{"n", 3}}), ConfigError);
  EXPECT_EQ(make_catalog_structure("example1", {{"n", 6}}).structure.chart.dim(), 6);
}

TEST(Catalog, Example1SolvesAcrossDimensions) {
  Rng rng = make_rng(42, 0);
  for (int n = 4; n <= 6; ++n) {
    const auto cs = make_example1(n);
    for (int k = 0; k < 5; ++k) {
      std::vector<double> p;
      for (auto [lo, hi] : cs.structure.chart.domain().intervals) p.push_back(uniform(rng, lo, hi));
      const StructurePoint sp(cs.structure, p, 4);
      EXPECT_LT(residual_principal(sp).relative(), 1e-10);
      EXPECT_LT(residual_trace(sp).relative(), 1e-10);
      const auto sc = special_case_residual(sp);
      EXPECT_LT(sc.scalar_equation.relative(), 1e-10);
    }
    EXPECT_LT(fiber_einstein_residual(*cs.warped, std::vector<double>(n - 1, 0.2)), 1e-12);
  }
}

TEST(RicciEigenvector, HoldsOnSolutions) {
  for (const char* name : {"example1", "schwarzschild_slice", "sphere_height", "curzon_product"}) {
    const auto cs = make_catalog_structure(name);
    const auto p = interior_point(cs.structure.chart.domain());
    const StructurePoint sp(cs.structure, p, 4);
    const auto chk = check_ricci_eigenvector(sp);
    if (std::string(name) == "curzon_product") {
      // radial Weyl curvature is nonzero there, so grad f need not be an eigenvector
      EXPECT_GT(chk.radial_weyl_norm, 1e-3);
      continue;
    }
    EXPECT_LT(chk.relative(), 1e-10) << name;
    EXPECT_LT(chk.combination_relative(), 1e-10) << name;
    EXPECT_LT(chk.radial_weyl_norm, 1e-10) << name;
  }
}

TEST(RicciEigenvector, KappaOnExample1) {
  // For the static vacuum f Ric(grad f) = Hess f(grad f); along r this is the
  // radial Ricci eigenvalue, which is -(n-1)(n-2) r^(-n) / 2 for the slice.
  const int n = 4;
  const auto cs = make_example1(n);
  const double r = 2.0;
  const double p[] = {r, 0.1, -0.2, 0.3};
  const StructurePoint sp(cs.structure, p, 4);
  const auto chk = check_ricci_eigenvector(sp);
  EXPECT_NEAR(chk.kappa, -(n - 1.0) * (n - 2.0) * std::pow(r, -n) / 2.0, 1e-12);
}

TEST(RicciEigenvector, CriticalPointThrows) {
  const auto cs = make_sphere(4);
  const double p[] = {0.0, 0.0, 0.0, 0.0};
  const StructurePoint sp(cs.structure, p, 4);
  EXPECT_THROW(check_ricci_eigenvector(sp), CriticalPoint);
}

TEST(LevelSet, SchwarzschildAtRadiusTwo) {
  const auto cs = make_schwarzschild_slice(4);
  Rng rng = make_rng(43, 0);
  const auto pts = cs.level_set(rng, 12);
  ASSERT_EQ(pts.size(), 12u);
  for (const auto& p : pts) {
    double r2 = 0.0;
    for (double x : p) r2 += x * x;
    EXPECT_NEAR(std::sqrt(r2), 2.0, 1e-12);
  }
  const auto chk = check_level_set_gradient(cs.structure, pts);
  EXPECT_LT(chk.spread, 1e-9);
  EXPECT_GT(chk.min_gradient, 1e-3);
  EXPECT_LT(chk.max_identity_residual, 1e-9);
  // |grad f| = f'(r) sqrt(1 - m) with f = sqrt(1 - r^-2): (1/r^3) / f * f = r^-3
  EXPECT_NEAR(chk.max_gradient, std::pow(2.0, -3), 1e-10);
}

TEST(LevelSet, SphereAndExample1) {
  Rng rng = make_rng(44, 0);
  for (const char* name : {"sphere_height", "example1", "miao_tam_ball"}) {
    const auto cs = make_catalog_structure(name);
    const auto chk = check_level_set_gradient(cs.structure, cs.level_set(rng, 12));
    EXPECT_LT(chk.spread, 1e-9) << name;
    EXPECT_LT(chk.max_identity_residual, 1e-9) << name;
  }
}

TEST(LevelSet, RejectsPointsOffTheLevelSet) {
  const auto cs = make_schwarzschild_slice(4);
  const std::vector<std::vector<double>> pts{{2.0, 0.0, 0.0, 0.0}, {2.5, 0.0, 0.0, 0.0}};
  EXPECT_THROW(check_level_set_gradient(cs.structure, pts), DomainError);
  EXPECT_THROW(check_level_set_gradient(cs.structure, {}), ConfigError);
}

TEST(LevelSet, RadialPotentialOnWarpedProduct) {
  // f depends on r alone: |grad f| is constant on level sets and every term
  // of the identity vanishes along the fiber, solution or not.
  const auto cs = make_warped_generic(4);
  Rng rng = make_rng(45, 0);
  const auto chk = check_level_set_gradient(cs.structure, cs.level_set(rng, 12));
  EXPECT_LT(chk.spread, 1e-9);
  EXPECT_LT(chk.max_identity_residual, 1e-12);
}

TEST(LevelSet, VaryingGradientIsDetected) {
  // f = x1 + x2^2 on flat space: the points (1 - t^2, t, 0, 0) share f = 1
  // while |grad f| = sqrt(1 + 4 t^2) varies.
  const std::vector<std::string> c{"x1", "x2", "x3", "x4"};
  const MetricChart chart =
      MetricChart::conformally_flat(c, 1.0, Box{std::vector(4, std::pair{-2.0, 2.0})});
  const EinsteinTypeStructure s{chart, chart.coordinate(0) + pow(chart.coordinate(1), 2), 0.0,
                                CaseTag::kGeneric, std::nullopt};
  std::vector<std::vector<double>> pts;
  for (double t : {0.0, 0.3, 0.6}) pts.push_back({1.0 - t * t, t, 0.0, 0.0});
  const auto chk = check_level_set_gradient(s, pts);
  EXPECT_NEAR(chk.spread, std::sqrt(1.0 + 4 * 0.36) - 1.0, 1e-12);
  EXPECT_GT(chk.max_identity_residual, 1e-3);
}

TEST(FiberWeyl, EinsteinFibersGiveZero) {
  for (const char* name : {"example1", "warped_generic"}) {
    const auto cs = make_catalog_structure(name);
    const auto p = interior_point(cs.structure.chart.domain());
    const auto chk = check_fiber_einstein_weyl(*cs.warped, p);
    EXPECT_LT(max_abs(chk.lhs), 1e-12) << name;
    EXPECT_LT(max_abs(chk.rhs), 1e-12) << name;
  }
}

TEST(FiberWeyl, FlatFiberGivesZero) {
  const std::vector<std::string> c{"u1", "u2", "u3"};
  WarpedProductChart w{1.0, Expr::variable(0, "r") + 0.5, "r", 1.0, 2.0,
                       MetricChart::conformally_flat(c, 1.0, Box{std::vector(3, std::pair{-1.0, 1.0})}),
                       0.0};
  const double p[] = {1.5, 0.1, 0.2, 0.3};
  const auto chk = check_fiber_einstein_weyl(w, p);
  EXPECT_LT(chk.max_difference, 1e-13);
}

TEST(FiberWeyl, NonEinsteinFiberMatchesHandValues) {
  const double a = 1.0, b = 2.0;
  const auto cs = make_warped_sphere_product(a, b);
  const double p[] = {1.7, 0.2, -0.1, 0.3, 0.25};
  const auto chk = check_fiber_einstein_weyl(*cs.warped, p);
  EXPECT_LT(chk.relative(), 1e-7);
  EXPECT_GT(max_abs(chk.rhs), 0.01);

  // Hand oracle: Ric_N = g_N / a^2 on the first factor and g_N / b^2 on the
  // second, R_N = 2/a^2 + 2/b^2, n = 5.
  const MetricValue gn = cs.warped->fiber.metric_at(std::span<const double>(p).subspan(1));
  const double rn = 2.0 / (a * a) + 2.0 / (b * b);
  for (int i = 0; i < 4; ++i) {
    const double k = i < 2 ? 1.0 / (a * a) : 1.0 / (b * b);
    const double expected = -(k - rn / 4.0) * gn.g(i, i) / 3.0;
    EXPECT_NEAR(chk.lhs(i, i), expected, 1e-10 * (1 + std::abs(expected)));
  }
  EXPECT_GT(fiber_einstein_residual(*cs.warped, std::span<const double>(p).subspan(1)), 0.1);
}

TEST(FiberWeyl, OppositeSignFailsOnNonEinsteinFiber) {
  const auto cs = make_warped_sphere_product(1.0, 2.0);
  const double p[] = {2.2, 0.1, 0.3, -0.2, 0.1};
  const auto chk = check_fiber_einstein_weyl(*cs.warped, p);
  double diff = 0.0;
  for (std::size_t i = 0; i < chk.lhs.size(); ++i)
    diff = std::max(diff, std::abs(chk.lhs[i] + chk.rhs[i]));
  EXPECT_GT(relative_residual(diff, chk.scale), 0.1);
}

TEST(FiberWeyl, IndependentOfWarp) {
  const auto cs = make_warped_sphere_product(1.0, 2.0);
  const double p1[] = {1.2, 0.1, 0.3, -0.2, 0.1};
  const double p2[] = {2.8, 0.1, 0.3, -0.2, 0.1};
  const auto c1 = check_fiber_einstein_weyl(*cs.warped, p1);
  const auto c2 = check_fiber_einstein_weyl(*cs.warped, p2);
  EXPECT_LT(max_abs_difference(c1.lhs, c2.lhs), 1e-11);
}

TEST(Curzon, NotConformallyFlat) {
  const auto cs = make_curzon_product(4);
  const auto p = interior_point(cs.structure.chart.domain());
  const StructurePoint sp(cs.structure, p, 4);
  EXPECT_GT(max_abs(values(weyl(sp.bundle()))), 1e-2);
  EXPECT_GT(max_abs(values(cotton(sp.bundle()))), 1e-2);
  EXPECT_LT(std::abs(sp.bundle().scalar_curvature().value()), 1e-11);
}

}  // namespace
}  // namespace etlab
