#include <gtest/gtest.h>

#include <cmath>

#include "etlab/catalog.hpp"
#include "etlab/structures.hpp"

namespace etlab {
namespace {

std::vector<std::string> names(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

Box cube(int n, double lo, double hi) { return Box{std::vector(n, std::pair{lo, hi})}; }

Expr squared(const MetricChart& c) {
  Expr s = 0.0;
  for (int i = 0; i < c.dim(); ++i) s = s + pow(c.coordinate(i), 2);
  return s;
}

// Unit sphere with the height function; h is left to the caller.
EinsteinTypeStructure sphere(int n, CaseTag tag) {
  const auto c = names(n);
  Expr s = 0.0;
  for (int i = 0; i < n; ++i) s = s + pow(Expr::variable(i, c[i]), 2);
  MetricChart chart = MetricChart::conformally_flat(c, 4.0 / pow(1.0 + s, 2), cube(n, -0.4, 0.4));
  const Expr f = (1.0 - s) / (1.0 + s);
  return {chart, f, static_cast<double>(n) * f, tag, std::nullopt};
}

EinsteinTypeStructure flat(int n, const Expr& f, const Expr& h, CaseTag tag) {
  return {MetricChart::conformally_flat(names(n), 1.0, cube(n, 0.5, 1.5)), f, h, tag,
          std::nullopt};
}

TEST(Principal, FlatLinearPotential) {
  const auto c = names(4);
  const auto s = flat(4, 2.0 * Expr::variable(0, c[0]) + 1.0, 0.0, CaseTag::kStaticNullLambda);
  const double p[] = {0.7, 0.8, 0.9, 1.0};
  const StructurePoint sp(s, p, 6);
  EXPECT_EQ(residual_principal(sp).max_abs(), 0.0);
  EXPECT_EQ(residual_trace(sp).residual, 0.0);
  EXPECT_EQ(residual_grad_h(sp).max_abs(), 0.0);
  const auto sc = special_case_residual(sp);
  EXPECT_EQ(sc.tensor_equation.max_abs(), 0.0);
  EXPECT_EQ(sc.scalar_equation.residual, 0.0);
}

TEST(Principal, SphereHeightFunction) {
  for (int n : {4, 5}) {
    const auto s = sphere(n, CaseTag::kStaticNonNullLambda);
    std::vector<double> p(n, 0.15);
    p[0] = -0.3;
    const StructurePoint sp(s, p, 6);
    EXPECT_LT(residual_principal(sp).relative(), 1e-12);
    EXPECT_LT(residual_trace(sp).relative(), 1e-12);
    EXPECT_LT(residual_grad_h(sp).relative(), 1e-12);
    const auto sc = special_case_residual(sp);
    EXPECT_LT(sc.tensor_equation.relative(), 1e-12);
    EXPECT_LT(sc.scalar_equation.relative(), 1e-12);
    const auto coeff = case_coefficient_residual(sp);
    ASSERT_TRUE(coeff.has_value());
    EXPECT_LT(coeff->relative(), 1e-12);
  }
}

TEST(Principal, SchwarzschildSliceStaticVacuum) {
  const auto cs = make_schwarzschild_slice(4);
  const double p[] = {2.0, 0.3, -0.2, 0.4};
  const StructurePoint sp(cs.structure, p, 6);
  EXPECT_LT(residual_principal(sp).relative(), 1e-12);
  EXPECT_LT(std::abs(sp.bundle().scalar_curvature().value()), 1e-12);
  EXPECT_GT(max_abs(values(sp.bundle().ricci())), 1e-2);
}

TEST(NegativeControl, ShiftedCoefficientFails) {
  auto s = sphere(4, CaseTag::kStaticNonNullLambda);
  s.h = s.h + 0.1;
  const double p[] = {0.1, 0.2, -0.1, 0.3};
  const StructurePoint sp(s, p, 4);
  EXPECT_GT(residual_principal(sp).relative(), 1e-3);
  EXPECT_GT(residual_trace(sp).relative(), 1e-3);
  EXPECT_GT(case_coefficient_residual(sp)->relative(), 1e-3);
}

TEST(NegativeControl, PerturbedPotentialBreaksFC) {
  auto cs = make_curzon_product(4);
  const double p[] = {1.0, 0.3, 0.5, 0.2};
  {
    const StructurePoint sp(cs.structure, p, 6);
    EXPECT_LT(residual_lemma_fC(sp).relative(), 1e-10);
  }
  cs.structure.f = cs.structure.f * (1.0 + 0.2 * cs.structure.chart.coordinate(1));
  const StructurePoint sp(cs.structure, p, 6);
  EXPECT_GT(residual_lemma_fC(sp).relative(), 1e-3);
  EXPECT_GT(residual_principal(sp).relative(), 1e-3);
}

// trace of (f Ric - Hess f - h g) is f R - Lap f - n h for any inputs
TEST(Property, TraceOfPrincipalIsTraceResidual) {
  Rng rng = make_rng(31, 0);
  const auto cs = make_warped_generic(4);
  for (int trial = 0; trial < 20; ++trial) {
    EinsteinTypeStructure s = cs.structure;
    const Expr r = s.chart.coordinate(0);
    const Expr y = s.chart.coordinate(1);
    s.f = uniform(rng, 0.5, 2.0) + uniform(rng, -1, 1) * r * y + uniform(rng, -1, 1) * sin(r);
    s.h = uniform(rng, -1, 1) * y + uniform(rng, -1, 1);
    std::vector<double> p{uniform(rng, 1.2, 2.8)};
    for (int i = 1; i < 4; ++i) p.push_back(uniform(rng, -0.5, 0.5));
    const StructurePoint sp(s, p, 4);
    const auto prin = residual_principal(sp);
    const auto tr = residual_trace(sp);
    const double traced = contract(prin.residual, 0, 1, &sp.bundle().metric_value())[0];
    EXPECT_NEAR(traced, tr.residual, 1e-11 * (1.0 + std::abs(tr.residual)));
  }
}

// (f, h) -> (c f, c h) scales every residual of the linear equation by c
TEST(Property, ScalingInvariance) {
  const auto cs = make_example1(4);
  const double p[] = {2.0, 0.1, -0.2, 0.3};
  for (double c : {2.0, 0.5}) {
    EinsteinTypeStructure s = cs.structure;
    s.f = c * s.f;
    s.h = c * s.h;
    const StructurePoint base(cs.structure, p, 6);
    const StructurePoint scaled_pt(s, p, 6);
    EXPECT_LT(residual_principal(scaled_pt).relative(), 1e-10);
    EXPECT_NEAR(residual_trace(scaled_pt).residual, c * residual_trace(base).residual, 1e-12);
    EXPECT_LT(residual_lemma_fC(scaled_pt).relative(), 1e-10);
    EXPECT_LT(residual_lemma_third_order(scaled_pt).relative(), 1e-6);
  }
  const auto ng = make_warped_generic(4);
  const double q[] = {1.7, 0.1, -0.2, 0.3};
  for (double c : {2.0, 0.5}) {
    EinsteinTypeStructure s = ng.structure;
    s.f = c * s.f;
    s.h = c * s.h;
    const StructurePoint base(ng.structure, q, 4);
    const StructurePoint scaled_pt(s, q, 4);
    const auto a = residual_principal(base);
    const auto b = residual_principal(scaled_pt);
    EXPECT_GT(a.max_abs(), 1e-3);
    EXPECT_LT(max_abs_difference(b.residual, c * a.residual), 1e-12 * (1 + a.scale));
    EXPECT_NEAR(residual_trace(scaled_pt).residual, c * residual_trace(base).residual, 1e-12);
  }
}

TEST(NearZero, PotentialGuard) {
  const auto c = names(4);
  const auto s = flat(4, Expr::variable(0, c[0]) - 1.0, 0.0, CaseTag::kStaticNullLambda);
  const double p[] = {1.0, 0.8, 0.9, 1.0};
  const StructurePoint sp(s, p, 4);
  try {
    residual_principal(sp);
    FAIL();
  } catch (const NearZeroPotential& e) {
    EXPECT_NE(std::string(e.what()).find("0.8"), std::string::npos) << e.what();
  }
  EXPECT_THROW(residual_lemma_fC(sp), NearZeroPotential);
}

TEST(Lemmas, OrderExhaustedNamesTheOrder) {
  const auto s = sphere(4, CaseTag::kStaticNonNullLambda);
  const double p[] = {0.1, 0.2, 0.1, 0.2};
  const StructurePoint sp(s, p, 5);
  EXPECT_NO_THROW(residual_lemma_second_order(sp));
  try {
    residual_lemma_third_order(sp);
    FAIL();
  } catch (const OrderExhausted& e) {
    EXPECT_EQ(e.required_order(), 6);
    EXPECT_NE(std::string(e.what()).find('6'), std::string::npos);
  }
  const StructurePoint low(s, p, 3);
  EXPECT_THROW(residual_lemma_bach(low), OrderExhausted);
  EXPECT_NO_THROW(residual_lemma_fC(low));
}

TEST(Lemmas, AllTermsNonzeroOnCurzonProduct) {
  for (int n : {4, 5}) {
    const auto cs = make_curzon_product(n);
    std::vector<double> p(n, 0.3);
    p[0] = 0.9;
    const StructurePoint sp(cs.structure, p, 6);
    const CurvatureBundle& b = sp.bundle();
    EXPECT_LT(residual_principal(sp).relative(), 1e-11);
    EXPECT_GT(max_abs(values(cotton(b))), 1e-3);
    EXPECT_GT(max_abs(values(radial_weyl(b, sp.f()))), 1e-3);
    EXPECT_GT(max_abs(values(bach(b).weyl_form)), 1e-3);

    const auto fc = residual_lemma_fC(sp);
    const auto bl = residual_lemma_bach(sp);
    const auto l2 = residual_lemma_second_order(sp);
    const auto l3 = residual_lemma_third_order(sp);
    EXPECT_GT(fc.scale, 1e-3);
    EXPECT_GT(bl.scale, 1e-3);
    EXPECT_GT(l2.scale, 1e-3);
    EXPECT_GT(l3.scale, 1e-3);
    EXPECT_LT(fc.relative(), 1e-8);
    EXPECT_LT(bl.relative(), 1e-7);
    EXPECT_LT(l2.relative(), 1e-7);
    EXPECT_LT(l3.relative(), 1e-6);
  }
}

TEST(Lemmas, DimensionThreeFC) {
  const auto cs = make_curzon_product(3);
  const double p[] = {1.0, 0.4, 0.5};
  const StructurePoint sp(cs.structure, p, 4);
  const auto fc = residual_lemma_fC(sp);
  EXPECT_GT(fc.scale, 1e-3);
  EXPECT_LT(fc.relative(), 1e-10);
  EXPECT_THROW(residual_lemma_bach(sp), UnsupportedDimension);
}

TEST(SpecialCases, CpeSphere) {
  const auto s = sphere(4, CaseTag::kCpe);
  const double p[] = {0.2, -0.1, 0.05, 0.3};
  const StructurePoint sp(s, p, 4);
  const auto sc = special_case_residual(sp);
  EXPECT_LT(sc.tensor_equation.relative(), 1e-12);
  EXPECT_LT(sc.scalar_equation.relative(), 1e-12);
  EXPECT_FALSE(case_coefficient_residual(sp).has_value());
}

TEST(SpecialCases, MiaoTamFlat) {
  const int n = 4;
  const auto c = MetricChart::conformally_flat(names(n), 1.0, cube(n, 0.5, 1.5));
  const Expr f = -squared(c) / (2.0 * (n - 1));
  const auto s = EinsteinTypeStructure{c, f, 1.0 / (n - 1), CaseTag::kMiaoTam, std::nullopt};
  const double p[] = {0.9, 0.7, 1.1, 0.6};
  const StructurePoint sp(s, p, 4);
  EXPECT_LT(residual_principal(sp).relative(), 1e-13);
  const auto sc = special_case_residual(sp);
  EXPECT_LT(sc.tensor_equation.relative(), 1e-13);
  EXPECT_LT(sc.scalar_equation.relative(), 1e-13);
  EXPECT_LT(case_coefficient_residual(sp)->relative(), 1e-13);
}

TEST(SpecialCases, GenericTagAndMissingFluidThrow) {
  auto s = sphere(4, CaseTag::kGeneric);
  const double p[] = {0.1, 0.1, 0.1, 0.1};
  {
    const StructurePoint sp(s, p, 3);
    EXPECT_THROW(special_case_residual(sp), ConfigError);
  }
  s.tag = CaseTag::kPerfectFluid;
  const StructurePoint sp(s, p, 3);
  EXPECT_THROW(special_case_residual(sp), ConfigError);
}

TEST(PerfectFluid, ConstantPotentialOnSphere) {
  // f = 1, h = n - 1: mu - rho = (n-1)^2 and (n-2) mu + n rho = 0.
  const int n = 4;
  auto s = sphere(n, CaseTag::kPerfectFluid);
  s.f = 1.0;
  s.h = n - 1.0;
  const double p[] = {0.1, 0.2, 0.3, -0.1};
  const StructurePoint sp(s, p, 4);
  const auto v = perfect_fluid_coefficients(sp);
  EXPECT_NEAR(v.density, 6.0, 1e-12);
  EXPECT_NEAR(v.pressure, -3.0, 1e-12);
  EXPECT_TRUE(v.energy_condition);
  EXPECT_LT(v.back_substitution_residual, 1e-12);
}

TEST(PerfectFluid, TraceSwitchSelectsTheMatchingPair) {
  // Height function, h = 4 f: mu - rho = 12. The printed trace equation
  // gives mu = 2 f + 8, rho = 2 f - 4; with the f factor, mu = 10, rho = -2.
  auto s = sphere(4, CaseTag::kPerfectFluid);
  const double p[] = {0.1, 0.2, 0.3, -0.1};
  StructureOptions plain, times_f;
  times_f.pfe_trace_times_f = true;

  s.fluid = PerfectFluidCoefficients{2.0 * s.f + 8.0, 2.0 * s.f - 4.0};
  {
    const StructurePoint a(s, p, 4, plain);
    const StructurePoint b(s, p, 4, times_f);
    EXPECT_LT(special_case_residual(a).scalar_equation.relative(), 1e-12);
    EXPECT_GT(special_case_residual(b).scalar_equation.relative(), 1e-3);
    EXPECT_LT(special_case_residual(a).tensor_equation.relative(), 1e-12);
    const auto v = perfect_fluid_coefficients(a);
    EXPECT_NEAR(v.density, 2.0 * a.f().value() + 8.0, 1e-12);
  }
  s.fluid = PerfectFluidCoefficients{10.0, -2.0};
  {
    const StructurePoint a(s, p, 4, plain);
    const StructurePoint b(s, p, 4, times_f);
    EXPECT_GT(special_case_residual(a).scalar_equation.relative(), 1e-3);
    EXPECT_LT(special_case_residual(b).scalar_equation.relative(), 1e-12);
    const auto v = perfect_fluid_coefficients(b);
    EXPECT_NEAR(v.density, 10.0, 1e-12);
    EXPECT_NEAR(v.pressure, -2.0, 1e-12);
    EXPECT_TRUE(v.energy_condition);
  }
}

TEST(CaseTags, RoundTrip) {
  for (CaseTag t : {CaseTag::kGeneric, CaseTag::kStaticNullLambda, CaseTag::kStaticNonNullLambda,
                    CaseTag::kPerfectFluid, CaseTag::kCpe, CaseTag::kMiaoTam})
    EXPECT_EQ(parse_case_tag(to_string(t)), t);
  EXPECT_THROW(parse_case_tag("vacuum"), ConfigError);
}

}  // namespace
}  // namespace etlab
