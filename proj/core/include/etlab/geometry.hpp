#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "etlab/expression.hpp"
#include "etlab/tensor.hpp"

namespace etlab {

/// Product of open intervals.
struct Box {
  std::vector<std::pair<double, double>> intervals;

  int dim() const noexcept { return static_cast<int>(intervals.size()); }
  bool contains(std::span<const double> point) const;
};

/// A coordinate chart carrying a Riemannian metric given by expressions.
class MetricChart {
 public:
  /// `components` is the full n x n matrix; entries (i, j) and (j, i) must
  /// be the same expression.
  MetricChart(std::vector<std::string> coords,
              std::vector<std::vector<Expr>> components, Box domain);

  static MetricChart diagonal(std::vector<std::string> coords,
                              const std::vector<Expr>& diagonal, Box domain);
  /// factor * delta_ij.
  static MetricChart conformally_flat(std::vector<std::string> coords,
                                      const Expr& factor, Box domain);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coord_names() const noexcept { return coords_; }
  const Expr& component(int i, int j) const { return components_[i][j]; }
  const Box& domain() const noexcept { return domain_; }

  /// Coordinate expression x_i.
  Expr coordinate(int i) const { return Expr::variable(i, coords_[i]); }
  /// Parses an expression over this chart's coordinates.
  Expr parse(const std::string& text) const { return parse_expression(text, coords_); }

  /// Metric values at a point; throws SingularMetric (naming the point) if
  /// the metric is not positive-definite there.
  MetricValue metric_at(std::span<const double> point) const;

 private:
  std::vector<std::string> coords_;
  std::vector<std::vector<Expr>> components_;
  Box domain_;
};

/// Curvature of a chart at one point, carried as jets so that further
/// covariant derivatives are exact.
///
/// Conventions: Christoffel symbols are stored as Gamma(m, i, j) = Gamma^m_ij;
/// the Riemann tensor is fully covariant with
///   grad_i grad_j grad_k u - grad_j grad_i grad_k u = R_ijkl grad^l u,
/// Ric_jl = g^ik R_ijkl and R = g^jl Ric_jl. All stored tensors are fully
/// covariant; every covariant derivative prepends its new slot.
///
/// Jet orders: g at K, Gamma at K-1, curvature at K-2. Each covariant
/// derivative consumes one order.
class CurvatureBundle {
 public:
  CurvatureBundle(const MetricChart& chart, std::span<const double> point,
                  int order);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  std::span<const double> point() const noexcept { return point_; }

  /// Throws OrderExhausted if the bundle's order is below `required`.
  void require_order(int required, const std::string& what) const;

  /// Jet of an expression over the chart coordinates at this point.
  Jet lift(const Expr& expr) const;

  const JetTensor& metric() const noexcept { return metric_; }
  /// g^ij truncated at `order` (0..K).
  const JetTensor& inverse_metric(int order) const { return inverse_[order]; }
  /// Gamma^m_ij truncated at `order` (0..K-1).
  const JetTensor& christoffel(int order) const { return christoffel_[order]; }
  const JetTensor& riemann() const noexcept { return riemann_; }
  const JetTensor& ricci() const noexcept { return ricci_; }
  const Jet& scalar_curvature() const noexcept { return scalar_; }
  const MetricValue& metric_value() const noexcept { return metric_value_; }

  /// Covariant derivative of a fully covariant jet tensor; the new slot is
  /// first and the result has one order less.
  JetTensor covariant_derivative(const JetTensor& t) const;
  /// g^{ab} t(.., a, .., b, ..) over two slots.
  JetTensor trace(const JetTensor& t, int slot_a, int slot_b) const;
  /// g^{ab} grad_a t(.., b, ..): divergence on `slot`.
  JetTensor divergence(const JetTensor& t, int slot) const;
  /// t_{.., a, ..} g^{ab} v_b: contraction of `slot` with a covector.
  JetTensor contract_vector(const JetTensor& t, int slot, const JetTensor& v) const;

  JetTensor gradient(const Jet& f) const;
  JetTensor hessian(const Jet& f) const;
  Jet laplacian(const Jet& f) const;

 private:
  int dim_;
  int order_;
  std::vector<double> point_;
  MetricValue metric_value_;
  JetTensor metric_;
  std::vector<JetTensor> inverse_;
  std::vector<JetTensor> christoffel_;
  JetTensor riemann_;
  JetTensor ricci_;
  Jet scalar_;
};

/// Every entry of a jet tensor truncated at `order`.
JetTensor truncated(const JetTensor& t, int order);
/// Lowest jet order among the components.
int tensor_order(const JetTensor& t);
/// t * s component-wise, truncating both to the lower order.
JetTensor scaled(const JetTensor& t, const Jet& s);
JetTensor scaled(const JetTensor& t, double s);
JetTensor operator+(const JetTensor& a, const JetTensor& b);
JetTensor operator-(const JetTensor& a, const JetTensor& b);

/// W_ijkl from Riemann, Ricci and R. Zero in dimension 3, with
/// `dimension_warning` set.
JetTensor weyl(const CurvatureBundle& b, bool* dimension_warning = nullptr);

/// C_ijk = grad_i Ric_jk - grad_j Ric_ik
///       - (grad_i R g_jk - grad_j R g_ik) / (2(n-1)).
JetTensor cotton(const CurvatureBundle& b);

/// The Bach tensor from two formulas that must agree:
///   weyl_form   = grad^k grad^l W_ikjl / (n-3) + R^kl W_ikjl / (n-2)
///   cotton_form = -grad^k C_ikj / (n-2) + R^kl W_ikjl / (n-2).
struct BachForms {
  JetTensor weyl_form;
  JetTensor cotton_form;
};
BachForms bach(const CurvatureBundle& b);

/// Successive Weyl divergences following the pattern
/// grad^k grad^i grad^j grad^l W_jkil:
///   k=1: grad^l W_ijkl (slots i, j, k)
///   k=2: grad^j grad^l W_jkil (slots k, i)
///   k=3: grad^i grad^j grad^l W_jkil (slot k)
///   k=4: the full scalar.
JetTensor div_weyl(const CurvatureBundle& b, int k);

/// W(., ., ., grad f) = W_ijkl grad^l f.
JetTensor radial_weyl(const CurvatureBundle& b, const Jet& f);

/// The tensor T_ijk built from Ric, R and grad f.
JetTensor t_tensor(const CurvatureBundle& b, const Jet& f);

/// grad_i grad_j grad_k u - grad_j grad_i grad_k u - R_ijkl grad^l u.
struct RicciIdentityResidual {
  RealTensor residual;
  double scale;
  double relative() const { return relative_residual(max_abs(residual), scale); }
};
RicciIdentityResidual ricci_identity_residual(const CurvatureBundle& b,
                                              const Jet& u);

/// Algebraic curvature checks at the bundle's point.
struct CurvatureSymmetryReport {
  double riemann_antisymmetry;  // max of |R_ijkl + R_jikl|, |R_ijkl + R_ijlk|
  double riemann_pair_symmetry;
  double first_bianchi;
  double riemann_scale;
  double contracted_bianchi;  // grad^j Ric_ji - grad_i R / 2
  double contracted_bianchi_scale;
  double metric_compatibility;  // max |grad g|
};
CurvatureSymmetryReport curvature_symmetries(const CurvatureBundle& b);

/// Verifies the sign convention on a flat chart and the unit sphere; throws
/// Error on mismatch.
void verify_sign_convention();

}  // namespace etlab
