#pragma once

#include <optional>
#include <span>
#include <string>

#include "etlab/geometry.hpp"

namespace etlab {

/// Which special equation an Einstein-type structure is meant to satisfy.
enum class CaseTag {
  kGeneric,
  kStaticNullLambda,     // f Ric = Hess f, Lap f = 0
  kStaticNonNullLambda,  // f Ric = Hess f + R f g / (n-1), Lap f + R f / (n-1) = 0
  kPerfectFluid,         // h = (mu - rho) f / (n-1), Lap f + ((n-2) mu + n rho) / (n-1) = 0
  kCpe,                  // (1+f) Ric0 = Hess f + R f g / (n(n-1)), Lap f + R f / (n-1) = 0
  kMiaoTam,              // h = (R f + 1) / (n-1), Lap f + R f / (n-1) = -n / (n-1)
};

std::string to_string(CaseTag tag);
/// Accepts the names produced by to_string; throws ConfigError otherwise.
CaseTag parse_case_tag(const std::string& name);

/// Density and pressure of a static perfect fluid.
struct PerfectFluidCoefficients {
  Expr density;
  Expr pressure;
};

/// A chart with potential f and coefficient h, meant to satisfy
/// f Ric = Hess f + h g.
struct EinsteinTypeStructure {
  MetricChart chart;
  Expr f;
  Expr h;
  CaseTag tag = CaseTag::kGeneric;
  std::optional<PerfectFluidCoefficients> fluid;
};

struct StructureOptions {
  /// Points with |f| <= potential_guard are rejected.
  double potential_guard = 1e-6;
  /// Multiply the fluid term of the perfect-fluid trace equation by f.
  bool pfe_trace_times_f = false;
};

struct TensorResidual {
  RealTensor residual;
  double scale;  // max |term| over the constituent terms

  double max_abs() const { return etlab::max_abs(residual); }
  double relative() const { return relative_residual(max_abs(), scale); }
};

struct ScalarResidual {
  double residual;
  double scale;

  double relative() const { return relative_residual(std::abs(residual), scale); }
};

/// A structure evaluated at one point: curvature bundle plus the jets of f
/// and h. All residual functions below take this context.
class StructurePoint {
 public:
  StructurePoint(const EinsteinTypeStructure& structure,
                 std::span<const double> point, int order = 6,
                 StructureOptions options = {});

  const EinsteinTypeStructure& structure() const noexcept { return *structure_; }
  const CurvatureBundle& bundle() const noexcept { return bundle_; }
  const StructureOptions& options() const noexcept { return options_; }
  int dim() const noexcept { return bundle_.dim(); }
  const Jet& f() const noexcept { return f_; }
  const Jet& h() const noexcept { return h_; }

  /// Throws NearZeroPotential when |f| <= guard at this point.
  void require_potential() const;

 private:
  const EinsteinTypeStructure* structure_;
  StructureOptions options_;
  CurvatureBundle bundle_;
  Jet f_;
  Jet h_;
};

/// f Ric - Hess f - h g.
TensorResidual residual_principal(const StructurePoint& p);
/// f R - Lap f - n h.
ScalarResidual residual_trace(const StructurePoint& p);
/// grad h - (R grad f + f grad R / 2) / (n-1).
TensorResidual residual_grad_h(const StructurePoint& p);

/// f C - W(., ., ., grad f) - T.
TensorResidual residual_lemma_fC(const StructurePoint& p);
/// (n-2) B_ij + grad^k(T_ikj / f) - (n-3)/(n-2) C_jki grad^k f / f
///   - W_ikjl grad^k f grad^l f / f^2.
TensorResidual residual_lemma_bach(const StructurePoint& p);
/// C_jki R^ik - (n-2) grad^i grad^k(T_ikj / f)
///   + (n-2) W_ikjl (R^ik grad^l f + R^il grad^k f) / f.
TensorResidual residual_lemma_second_order(const StructurePoint& p);
/// |C|^2 / 2 + R^ik grad^j C_jki - (n-2) grad^j grad^i grad^k(T_ikj / f)
///   + (n-2) grad^j[W_ikjl (R^ik grad^l f + R^il grad^k f) / f].
ScalarResidual residual_lemma_third_order(const StructurePoint& p);

/// The two equations of the structure's special case.
struct SpecialCaseResidual {
  TensorResidual tensor_equation;
  ScalarResidual scalar_equation;
};
/// Throws ConfigError for the generic tag, or for a perfect fluid without
/// density and pressure.
SpecialCaseResidual special_case_residual(const StructurePoint& p);

/// |h - h_case| where the case fixes h in terms of f and R; empty for the
/// generic and CPE tags, which have no such formula.
std::optional<ScalarResidual> case_coefficient_residual(const StructurePoint& p);

/// Density and pressure solving the perfect-fluid pair for the structure's
/// f, h and Lap f at a point.
struct PerfectFluidValues {
  double density;
  double pressure;
  bool energy_condition;            // density >= |pressure|
  double back_substitution_residual;  // max of the two equation residuals
};
PerfectFluidValues perfect_fluid_coefficients(const StructurePoint& p);

}  // namespace etlab
