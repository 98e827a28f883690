#include <gtest/gtest.h>

#include <cmath>

#include "etlab/algebra.hpp"
#include "etlab/tensor.hpp"

namespace etlab {
namespace {

RealTensor diag(int n, std::initializer_list<double> d) {
  RealTensor g = RealTensor::covariant(n, 2, 0.0);
  int i = 0;
  for (double x : d) g(i, i) = x, ++i;
  return g;
}

TEST(Contract, TraceOfIdentityIsDimension) {
  for (int n = 2; n <= 6; ++n) {
    const MetricValue m = MetricValue::euclidean(n);
    EXPECT_DOUBLE_EQ(contract(m.g, 0, 1, &m)[0], n);
  }
}

TEST(Contract, MixedSlotsNeedNoMetric) {
  RealTensor t(3, {Variance::kContravariant, Variance::kCovariant}, 0.0);
  t(0, 0) = 1.0, t(1, 1) = 2.0, t(2, 2) = 3.0, t(0, 1) = 7.0;
  EXPECT_DOUBLE_EQ(contract(t, 0, 1)[0], 6.0);
  RealTensor c = RealTensor::covariant(3, 2, 0.0);
  EXPECT_THROW(contract(c, 0, 1), ShapeMismatch);
}

TEST(Contract, GInverseTimesG) {
  Rng rng = make_rng(1, 0);
  const MetricValue m = random_spd_metric(5, rng);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      double s = 0.0;
      for (int k = 0; k < 5; ++k) s += m.g_inv(i, k) * m.g(k, j);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-14);
    }
}

TEST(RaiseLower, DiagonalMetric) {
  const MetricValue m = MetricValue::from_matrix(diag(2, {2.0, 2.0}));
  RealTensor v(2, {Variance::kContravariant}, 0.0);
  v(0) = 1.0;
  const RealTensor low = lower(v, 0, m);
  EXPECT_DOUBLE_EQ(low(0), 2.0);
  EXPECT_DOUBLE_EQ(low(1), 0.0);
  EXPECT_EQ(low.variances()[0], Variance::kCovariant);
}

TEST(RaiseLower, RoundTrip) {
  Rng rng = make_rng(2, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const MetricValue m = random_spd_metric(4, rng);
    const RealTensor t = random_rank3(4, rng);
    const RealTensor back = lower(raise(t, 1, m), 1, m);
    EXPECT_LT(max_abs_difference(back, t), 1e-13);
  }
}

TEST(RaiseLower, WrongVarianceThrows) {
  const MetricValue m = MetricValue::euclidean(3);
  RealTensor v(3, {Variance::kContravariant}, 0.0);
  EXPECT_THROW(raise(v, 0, m), ShapeMismatch);
  EXPECT_THROW(lower(m.g, 0, m), ShapeMismatch);
}

TEST(Norm, OrthonormalFrameSumsSquares) {
  const MetricValue m = MetricValue::euclidean(3);
  RealTensor c = RealTensor::covariant(3, 3, 0.0);
  c(0, 1, 2) = 1.0;
  c(1, 0, 2) = -1.0;
  EXPECT_DOUBLE_EQ(norm_squared(c, m), 2.0);
}

TEST(MetricValue, RejectsSingularAndIndefinite) {
  EXPECT_THROW(MetricValue::from_matrix(diag(2, {1.0, 0.0})), SingularMetric);
  EXPECT_THROW(MetricValue::from_matrix(diag(2, {1.0, -1.0})), SingularMetric);
  RealTensor a = diag(2, {1.0, 1.0});
  a(0, 1) = 0.5;
  EXPECT_THROW(MetricValue::from_matrix(a), SingularMetric);
}

// Component formula for T written out independently of t_tensor.
RealTensor t_oracle(const RealTensor& s, double r, const RealTensor& v, const MetricValue& m) {
  const int n = s.dim();
  const auto& g = m.g;
  const auto& gi = m.g_inv;
  RealTensor out = RealTensor::covariant(n, 3, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double sjv = 0.0, siv = 0.0;
        for (int l = 0; l < n; ++l)
          for (int p = 0; p < n; ++p) {
            sjv += s(j, l) * gi(l, p) * v(p);
            siv += s(i, l) * gi(l, p) * v(p);
          }
        out(i, j, k) = (sjv * g(i, k) - siv * g(j, k) + r * (v(i) * g(j, k) - v(j) * g(i, k)) +
                        (n - 1) * (v(j) * s(i, k) - v(i) * s(j, k))) /
                       (n - 2);
      }
  return out;
}

TEST(TTensor, MatchesComponentFormula) {
  Rng rng = make_rng(3, 0);
  for (int n = 3; n <= 6; ++n) {
    const MetricValue m = random_spd_metric(n, rng);
    const RealTensor s = random_symmetric(n, rng);
    const RealTensor v = random_covector(n, rng);
    const double r = contract(s, 0, 1, &m)[0];
    EXPECT_LT(max_abs_difference(t_tensor(s, r, v, m), t_oracle(s, r, v, m)), 1e-13);
  }
}

TEST(TTensor, EinsteinInputGivesZero) {
  Rng rng = make_rng(4, 0);
  for (int n = 3; n <= 6; ++n) {
    const MetricValue m = random_spd_metric(n, rng);
    const double lambda = uniform(rng, -2.0, 2.0);
    const RealTensor s = lambda * m.g;
    const RealTensor v = random_covector(n, rng);
    const RealTensor t = t_tensor(s, n * lambda, v, m);
    EXPECT_LT(max_abs(t), 1e-12) << "n=" << n;
  }
}

TEST(TTensor, HasCottonSymmetries) {
  Rng rng = make_rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 4;
    const MetricValue m = random_spd_metric(n, rng);
    const RealTensor s = random_symmetric(n, rng);
    const RealTensor v = random_covector(n, rng);
    const RealTensor t = t_tensor(s, contract(s, 0, 1, &m)[0], v, m);
    const auto rep = check_cotton_symmetries(t, m);
    EXPECT_LT(rep.relative(), 1e-13);
    EXPECT_GT(rep.scale, 1e-3);
  }
}

TEST(CottonSymmetries, RandomRank3Fails) {
  Rng rng = make_rng(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const MetricValue m = random_spd_metric(4, rng);
    EXPECT_GT(check_cotton_symmetries(random_rank3(4, rng), m).relative(), 0.1);
  }
}

TEST(CottonSymmetries, ZeroTensorPasses) {
  const MetricValue m = MetricValue::euclidean(4);
  const auto rep = check_cotton_symmetries(RealTensor::covariant(4, 3, 0.0), m);
  EXPECT_EQ(rep.max_residual(), 0.0);
}

TEST(Algebra, HessianCottonCancellationAndContraction) {
  AlgebraOptions opts;
  opts.dims = {4};
  const AlgebraReport rep = random_algebra_identity_suite(42, 1000, opts);
  EXPECT_TRUE(rep.passed());
  EXPECT_LT(rep.max_hessian_residual, 1e-12);
  EXPECT_LT(rep.max_contraction_residual, 1e-9);
  EXPECT_EQ(rep.trials, 1000);
}

TEST(Algebra, ContractionIdentityByHand) {
  // Independent evaluation of both sides for C = T / f via the oracle formula.
  Rng rng = make_rng(7, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 3;
    const MetricValue m = random_spd_metric(n, rng);
    const RealTensor s = random_symmetric(n, rng);
    const RealTensor v = random_covector(n, rng);
    const double r = contract(s, 0, 1, &m)[0];
    const double f = uniform(rng, 0.5, 2.0);
    const RealTensor c = (1.0 / f) * t_oracle(s, r, v, m);
    RealTensor s_up = raise(raise(s, 0, m), 1, m);
    RealTensor v_up = raise(v, 0, m);
    double lhs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) lhs += s_up(j, i) * v_up(k) * c(k, j, i);
    const double rhs = -(n - 2.0) * f / (2.0 * (n - 1.0)) * norm_squared(c, m);
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::abs(rhs)));
    const auto sides = cotton_contraction_sides(s, v, c, f, m);
    EXPECT_NEAR(sides.lhs, lhs, 1e-12 * (1.0 + std::abs(lhs)));
    EXPECT_NEAR(sides.rhs, rhs, 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST(Algebra, TrivialInputs) {
  Rng rng = make_rng(8, 0);
  const MetricValue m = random_spd_metric(4, rng);
  const RealTensor s = random_symmetric(4, rng);
  const RealTensor zero_c = RealTensor::covariant(4, 3, 0.0);
  const auto sides = cotton_contraction_sides(s, random_covector(4, rng), zero_c, 1.0, m);
  EXPECT_EQ(sides.lhs, 0.0);
  EXPECT_EQ(sides.rhs, 0.0);
  const RealTensor v0 = RealTensor::covariant(4, 1, 0.0);
  EXPECT_EQ(max_abs(t_tensor(s, 1.0, v0, m)), 0.0);
}

TEST(Algebra, RandomRank3BreaksContractionIdentity) {
  Rng rng = make_rng(9, 0);
  int broken = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const MetricValue m = random_spd_metric(4, rng);
    const RealTensor s = random_symmetric(4, rng);
    const RealTensor v = random_covector(4, rng);
    const auto sides = cotton_contraction_sides(s, v, random_rank3(4, rng), 1.0, m);
    const double diff = std::abs(sides.lhs - sides.rhs);
    const double size = std::max(std::abs(sides.lhs), std::abs(sides.rhs));
    EXPECT_GT(relative_residual(diff, size), 1e-3);
    if (diff > 0.1 * size) ++broken;
    EXPECT_GT(max_abs(hessian_cotton_contraction(random_symmetric(4, rng),
                                                 random_rank3(4, rng), m)),
              1e-3);
  }
  EXPECT_GE(broken, 15);
}

TEST(Algebra, ReproducibleAcrossThreadCounts) {
  AlgebraOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = random_algebra_identity_suite(5, 200, one);
  const auto b = random_algebra_identity_suite(5, 200, four);
  EXPECT_EQ(a.max_hessian_residual, b.max_hessian_residual);
  EXPECT_EQ(a.max_contraction_residual, b.max_contraction_residual);
  EXPECT_EQ(a.mean_contraction_residual, b.mean_contraction_residual);
  EXPECT_THROW(random_algebra_identity_suite(5, 0), ConfigError);
}

}  // namespace
}  // namespace etlab
