#include "etlab/structures.hpp"

#include <sstream>

namespace etlab {
namespace {

constexpr Variance kContra = Variance::kContravariant;

double scale_of(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

std::string format_point(std::span<const double> point) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
  os << ")";
  return os.str();
}

// R^ab as jets at the Ricci tensor's order.
JetTensor ricci_up(const CurvatureBundle& b) {
  const int n = b.dim();
  const JetTensor& ric = b.ricci();
  const int k = tensor_order(ric);
  const JetTensor& gi = b.inverse_metric(k);
  JetTensor mixed(n, {kContra, Variance::kCovariant}, Jet(n, k));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int p = 0; p < n; ++p) mixed(a, c).add_product(gi(a, p), ric(p, c));
  JetTensor up(n, {kContra, kContra}, Jet(n, k));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int q = 0; q < n; ++q) up(a, c).add_product(mixed(a, q), gi(q, c));
  return up;
}

// v^a = g^ab v_b for a covector of jets.
std::vector<Jet> raise_vector(const CurvatureBundle& b, const JetTensor& v) {
  const int n = b.dim();
  const int k = tensor_order(v);
  const JetTensor& gi = b.inverse_metric(k);
  std::vector<Jet> up(n, Jet(n, k));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) up[a].add_product(gi(a, c), v(c));
  return up;
}

// T_ikj / f as jets.
JetTensor t_over_f(const StructurePoint& p) {
  return scaled(t_tensor(p.bundle(), p.f()), recip(p.f()));
}

// V_j = W_ikjl (R^ik grad^l f + R^il grad^k f) / f, as jets.
JetTensor weyl_ricci_gradient_over_f(const StructurePoint& p) {
  const CurvatureBundle& b = p.bundle();
  const int n = b.dim();
  const JetTensor w = weyl(b);
  const int k = tensor_order(w);
  const JetTensor ric = truncated(ricci_up(b), k);
  const std::vector<Jet> df = raise_vector(b, truncated(b.gradient(p.f()), k));
  JetTensor v = JetTensor::covariant(n, 1, Jet(n, k));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int kk = 0; kk < n; ++kk)
        for (int l = 0; l < n; ++l) {
          Jet s = ric(i, kk) * df[l];
          s.add_product(ric(i, l), df[kk]);
          v(j).add_product(w(i, kk, j, l), s);
        }
  return scaled(v, recip(p.f()));
}

}  // namespace

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::kGeneric: return "generic";
    case CaseTag::kStaticNullLambda: return "static_null_lambda";
    case CaseTag::kStaticNonNullLambda: return "static_nonnull_lambda";
    case CaseTag::kPerfectFluid: return "perfect_fluid";
    case CaseTag::kCpe: return "cpe";
    case CaseTag::kMiaoTam: return "miao_tam";
  }
  return "generic";
}

CaseTag parse_case_tag(const std::string& name) {
  for (CaseTag t : {CaseTag::kGeneric, CaseTag::kStaticNullLambda, CaseTag::kStaticNonNullLambda,
                    CaseTag::kPerfectFluid, CaseTag::kCpe, CaseTag::kMiaoTam}) {
    if (to_string(t) == name) return t;
  }
  throw ConfigError("unknown case tag '" + name + "'");
}

StructurePoint::StructurePoint(const EinsteinTypeStructure& structure,
                               std::span<const double> point, int order,
                               StructureOptions options)
    : structure_(&structure),
      options_(options),
      bundle_(structure.chart, point, order),
      f_(bundle_.lift(structure.f)),
      h_(bundle_.lift(structure.h)) {}

void StructurePoint::require_potential() const {
  if (!(std::abs(f_.value()) > options_.potential_guard)) {
    throw NearZeroPotential("potential |f| = " + std::to_string(std::abs(f_.value())) +
                            " is below the guard at point " + format_point(bundle_.point()));
  }
}

TensorResidual residual_principal(const StructurePoint& p) {
  p.require_potential();
  const CurvatureBundle& b = p.bundle();
  const int n = b.dim();
  const double f = p.f().value();
  const double h = p.h().value();
  const RealTensor ric = values(b.ricci());
  const RealTensor hess = values(b.hessian(p.f()));
  const RealTensor& g = b.metric_value().g;
  RealTensor res = RealTensor::covariant(n, 2, 0.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      res(i, j) = f * ric(i, j) - hess(i, j) - h * g(i, j);
      scale = std::max(scale, scale_of({f * ric(i, j), hess(i, j), h * g(i, j)}));
    }
  return {std::move(res), scale};
}

ScalarResidual residual_trace(const StructurePoint& p) {
  p.require_potential();
  const CurvatureBundle& b = p.bundle();
  const double f = p.f().value();
  const double r = b.scalar_curvature().value();
  const double lap = b.laplacian(p.f()).value();
  const double nh = b.dim() * p.h().value();
  return {f * r - lap - nh, scale_of({f * r, lap, nh})};
}

TensorResidual residual_grad_h(const StructurePoint& p) {
  p.require_potential();
  const CurvatureBundle& b = p.bundle();
  const int n = b.dim();
  const double f = p.f().value();
  const double r = b.scalar_curvature().value();
  const RealTensor dh = values(b.gradient(p.h()));
  const RealTensor df = values(b.gradient(p.f()));
  const RealTensor dr = values(b.gradient(b.scalar_curvature()));
  RealTensor res = RealTensor::covariant(n, 1, 0.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rhs = (r * df(i) + 0.5 * f * dr(i)) / (n - 1);
    res(i) = dh(i) - rhs;
    scale = std::max(scale, scale_of({dh(i), r * df(i) / (n - 1), 0.5 * f * dr(i) / (n - 1)}));
  }
  return {std::move(res), scale};
}

TensorResidual residual_lemma_fC(const StructurePoint& p) {
  p.require_potential();
  p.bundle().require_order(3, "lemma f C = W(grad f) + T");
  const CurvatureBundle& b = p.bundle();
  const double f = p.f().value();
  const RealTensor fc = f * values(cotton(b));
  const RealTensor wdf = values(radial_weyl(b, p.f()));
  const RealTensor t = values(t_tensor(b, p.f()));
  return {fc - wdf - t, scale_of({max_abs(fc), max_abs(wdf), max_abs(t)})};
}

TensorResidual residual_lemma_bach(const StructurePoint& p) {
  p.require_potential();
  const CurvatureBundle& b = p.bundle();
  b.require_order(4, "Bach lemma");
  const int n = b.dim();
  if (n < 4) throw UnsupportedDimension("Bach lemma needs dimension >= 4");
  const double f = p.f().value();

  const RealTensor bach_term = double(n - 2) * values(bach(b).weyl_form);
  const RealTensor div_t = values(b.divergence(t_over_f(p), 1));  // (i, j)
  const JetTensor grad = b.gradient(p.f());
  const RealTensor c_df = values(b.contract_vector(cotton(b), 1, grad));  // (j, i)
  const RealTensor w_df_df =
      values(b.contract_vector(b.contract_vector(weyl(b), 3, grad), 1, grad));  // (i, j)

  const double cc = (n - 3.0) / (n - 2.0);
  RealTensor res = RealTensor::covariant(n, 2, 0.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double c_term = cc * c_df(j, i) / f;
      const double w_term = w_df_df(i, j) / (f * f);
      res(i, j) = bach_term(i, j) + div_t(i, j) - c_term - w_term;
      scale = std::max(scale, scale_of({bach_term(i, j), div_t(i, j), c_term, w_term}));
    }
  return {std::move(res), scale};
}

TensorResidual residual_lemma_second_order(const StructurePoint& p) {
  p.require_potential();
  const CurvatureBundle& b = p.bundle();
  b.require_order(5, "second-order derivative lemma");
  const int n = b.dim();
  if (n < 4) throw UnsupportedDimension("derivative lemmas need dimension >= 4");

  const RealTensor c = values(cotton(b));
  const RealTensor ric = values(ricci_up(b));
  const RealTensor ddt = values(b.divergence(b.divergence(t_over_f(p), 1), 0));  // (j)
  const RealTensor v = values(weyl_ricci_gradient_over_f(p));

  RealTensor res = RealTensor::covariant(n, 1, 0.0);
  double scale = 0.0;
  for (int j = 0; j < n; ++j) {
    double cr = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) cr += c(j, k, i) * ric(i, k);
    const double t_term = (n - 2.0) * ddt(j);
    const double w_term = (n - 2.0) * v(j);
    res(j) = cr - t_term + w_term;
    scale = std::max(scale, scale_of({cr, t_term, w_term}));
  }
  return {std::move(res), scale};
}

ScalarResidual residual_lemma_third_order(const StructurePoint& p) {
  p.require_potential();
  const CurvatureBundle& b = p.bundle();
  b.require_order(6, "third-order derivative lemma");
  const int n = b.dim();
  if (n < 4) throw UnsupportedDimension("derivative lemmas need dimension >= 4");

  const JetTensor c_jets = cotton(b);
  const RealTensor c = values(c_jets);
  const double c_norm2 = norm_squared(c, b.metric_value());

  const RealTensor div_c = values(b.divergence(c_jets, 0));  // (k, i)
  const RealTensor ric = values(ricci_up(b));
  double r_div_c = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) r_div_c += ric(i, k) * div_c(k, i);

  const JetTensor x = t_over_f(p);
  const double dddt = b.divergence(b.divergence(b.divergence(x, 1), 0), 0)[0].value();
  const double div_v = b.divergence(weyl_ricci_gradient_over_f(p), 0)[0].value();

  const double t_term = (n - 2.0) * dddt;
  const double w_term = (n - 2.0) * div_v;
  return {0.5 * c_norm2 + r_div_c - t_term + w_term,
          scale_of({0.5 * c_norm2, r_div_c, t_term, w_term})};
}

SpecialCaseResidual special_case_residual(const StructurePoint& p) {
  const EinsteinTypeStructure& s = p.structure();
  const CurvatureBundle& b = p.bundle();
  const int n = b.dim();
  const double f = p.f().value();
  const double r = b.scalar_curvature().value();
  const RealTensor ric = values(b.ricci());
  const RealTensor hess = values(b.hessian(p.f()));
  const RealTensor& g = b.metric_value().g;
  const double lap = b.laplacian(p.f()).value();

  // tensor equation: a * Ric_ij + c * g_ij - Hess_ij with a and c per case
  double ric_coeff = f;
  double g_coeff = 0.0;
  double scalar_value = 0.0;
  double scalar_scale = 0.0;
  switch (s.tag) {
    case CaseTag::kGeneric:
      throw ConfigError("special_case_residual needs a case tag other than generic");
    case CaseTag::kStaticNullLambda:
      p.require_potential();
      scalar_value = lap;
      scalar_scale = std::abs(lap);
      break;
    case CaseTag::kStaticNonNullLambda:
      p.require_potential();
      g_coeff = -r * f / (n - 1);
      scalar_value = lap + r * f / (n - 1);
      scalar_scale = scale_of({lap, r * f / (n - 1)});
      break;
    case CaseTag::kPerfectFluid: {
      p.require_potential();
      if (!s.fluid) {
        throw ConfigError("perfect_fluid structure needs density and pressure expressions");
      }
      const double mu = s.fluid->density.evaluate(b.point());
      const double rho = s.fluid->pressure.evaluate(b.point());
      g_coeff = -(mu - rho) * f / (n - 1);
      double fluid = ((n - 2) * mu + n * rho) / (n - 1);
      if (p.options().pfe_trace_times_f) fluid *= f;
      scalar_value = lap + fluid;
      scalar_scale = scale_of({lap, fluid});
      break;
    }
    case CaseTag::kCpe: {
      if (!(std::abs(1.0 + f) > p.options().potential_guard)) {
        throw NearZeroPotential("|1 + f| is below the guard at point " + format_point(b.point()));
      }
      // (1+f)(Ric - R g / n) - Hess f - R f g / (n(n-1))
      ric_coeff = 1.0 + f;
      g_coeff = -(1.0 + f) * r / n - r * f / (n * (n - 1.0));
      scalar_value = lap + r * f / (n - 1);
      scalar_scale = scale_of({lap, r * f / (n - 1)});
      break;
    }
    case CaseTag::kMiaoTam:
      p.require_potential();
      g_coeff = -(r * f + 1.0) / (n - 1);
      scalar_value = lap + r * f / (n - 1) + n / (n - 1.0);
      scalar_scale = scale_of({lap, r * f / (n - 1), n / (n - 1.0)});
      break;
  }
  RealTensor res = RealTensor::covariant(n, 2, 0.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      res(i, j) = ric_coeff * ric(i, j) + g_coeff * g(i, j) - hess(i, j);
      scale = std::max(scale, scale_of({ric_coeff * ric(i, j), g_coeff * g(i, j), hess(i, j)}));
    }
  return {{std::move(res), scale}, {scalar_value, scalar_scale}};
}

std::optional<ScalarResidual> case_coefficient_residual(const StructurePoint& p) {
  const EinsteinTypeStructure& s = p.structure();
  const int n = p.dim();
  const double f = p.f().value();
  const double h = p.h().value();
  const double r = p.bundle().scalar_curvature().value();
  double expected = 0.0;
  switch (s.tag) {
    case CaseTag::kGeneric:
    case CaseTag::kCpe: return std::nullopt;
    case CaseTag::kStaticNullLambda: expected = 0.0; break;
    case CaseTag::kStaticNonNullLambda: expected = r * f / (n - 1); break;
    case CaseTag::kPerfectFluid: {
      if (!s.fluid) return std::nullopt;
      const double mu = s.fluid->density.evaluate(p.bundle().point());
      const double rho = s.fluid->pressure.evaluate(p.bundle().point());
      expected = (mu - rho) * f / (n - 1);
      break;
    }
    case CaseTag::kMiaoTam: expected = (r * f + 1.0) / (n - 1); break;
  }
  return ScalarResidual{h - expected, scale_of({h, expected})};
}

PerfectFluidValues perfect_fluid_coefficients(const StructurePoint& p) {
  const int n = p.dim();
  const double f = p.f().value();
  if (!(std::abs(f) > p.options().potential_guard)) {
    throw NearZeroPotential("perfect-fluid system is singular: f = " + std::to_string(f));
  }
  const double h = p.h().value();
  const double lap = p.bundle().laplacian(p.f()).value();
  // mu - rho = (n-1) h / f;  (n-2) mu + n rho = -(n-1) lap [/ f]
  const double diff = (n - 1) * h / f;
  double sum = -(n - 1) * lap;
  if (p.options().pfe_trace_times_f) sum /= f;
  const double rho = (sum - (n - 2) * diff) / (2.0 * (n - 1));
  const double mu = rho + diff;

  double fluid = ((n - 2) * mu + n * rho) / (n - 1);
  if (p.options().pfe_trace_times_f) fluid *= f;
  const double r1 = std::abs(h - (mu - rho) * f / (n - 1));
  const double r2 = std::abs(lap + fluid);
  // the energy condition is checked with a roundoff allowance
  const double slack = 1e-12 * (1.0 + std::abs(mu) + std::abs(rho));
  return {mu, rho, mu + slack >= std::abs(rho), std::max(r1, r2)};
}

}  // namespace etlab
