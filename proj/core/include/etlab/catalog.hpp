#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etlab/random.hpp"
#include "etlab/structures.hpp"

namespace etlab {

using CatalogParams = std::map<std::string, double>;

/// g = base_factor(r) dr^2 + warp(r)^2 g_fiber over r in (r_min, r_max).
/// The assembled chart has coordinates (r, fiber coordinates...).
struct WarpedProductChart {
  Expr base_factor;  // variable 0 is r
  Expr warp;         // variable 0 is r
  std::string r_name = "r";
  double r_min;
  double r_max;
  MetricChart fiber;
  std::optional<double> fiber_einstein_constant;  // empty for non-Einstein fibers

  MetricChart assemble() const;
};

/// Unit round sphere in the stereographic chart 4/(1+|x|^2)^2 delta, sampled
/// on the box (-half_width, half_width)^dim.
MetricChart stereographic_sphere(int dim, double half_width = 1.0,
                                 const std::string& prefix = "x",
                                 double radius = 1.0);

/// max |Ric - lambda g| on the fiber at a fiber point.
double fiber_einstein_residual(const WarpedProductChart& w,
                               std::span<const double> fiber_point, int order = 4);

/// A catalog entry built from parameters.
struct CatalogStructure {
  std::string name;
  EinsteinTypeStructure structure;
  /// Whether (g, f, h) is claimed to satisfy the Einstein-type equation.
  bool solution = true;
  /// Suites whose identities the entry claims; "all" in a run config means
  /// these.
  std::vector<std::string> default_suites;
  /// Ric is a multiple of g along the level sets of f, so the eigenvalue
  /// combinations of the classification vanish.
  bool level_sets_umbilic_ricci = true;
  std::optional<WarpedProductChart> warped;
  /// `count` points sharing one value of f; empty when the entry has no
  /// closed-form level sets.
  std::function<std::vector<std::vector<double>>(Rng&, int count)> level_set;
};

struct CatalogParamInfo {
  std::string name;
  double default_value;
  std::string description;
};

struct CatalogEntryInfo {
  std::string name;
  std::string description;
  std::string realizes;
  std::vector<CatalogParamInfo> params;
};

const std::vector<CatalogEntryInfo>& catalog_entries();

/// Builds the named entry; unknown names, unknown parameters and unsupported
/// dimensions throw ConfigError.
CatalogStructure make_catalog_structure(const std::string& name,
                                        const CatalogParams& params = {});

CatalogStructure make_flat(int n, double slope = 1.0, double offset = 0.0);
CatalogStructure make_sphere(int n, CaseTag tag = CaseTag::kStaticNonNullLambda);
CatalogStructure make_schwarzschild_slice(int n);
CatalogStructure make_example1(int n, double delta = 0.3, double r_max = 4.0);
CatalogStructure make_miao_tam(int n);
/// g = dr^2 + (r + amplitude sin r)^2 g_{S^{n-1}}, f = r + r^2 / 4, h = 0.
/// Not a solution; used by the classification checks.
CatalogStructure make_warped_generic(int n, double amplitude = 0.3);
/// g = dr^2 + r^2 (S^2(a) x S^2(b)), n = 5; non-Einstein fiber when a != b.
CatalogStructure make_warped_sphere_product(double a, double b);
/// Slice of the Curzon static vacuum in Weyl coordinates (rho, z, phi) times
/// flat R^(n-3): g = e^(2k-2U)(drho^2 + dz^2) + rho^2 e^(-2U) dphi^2 + dw^2,
/// U = -m/R, k = -m^2 rho^2 / (2 R^4), f = e^U, h = 0. Not conformally flat,
/// with nonzero Cotton tensor and radial Weyl curvature.
CatalogStructure make_curzon_product(int n, double mass = 1.0);

/// Profile of the example1 entry at areal radius r: t(r) from the arc-length integral,
/// f = r and f' = sqrt(1 - r^(2-n)).
struct Example1Profile {
  double t;
  double f;
  double f_prime;
};
Example1Profile example1_profile(int n, double r);

/// Ric(grad f) - kappa grad f, kappa = <Ric(grad f), grad f> / |grad f|^2,
/// and the combinations grad_j f [R_jj + (n-1) R_ii - R], i != j, in a
/// frame diagonalizing Ric.
struct RicciEigenvectorCheck {
  RealTensor residual;  // contravariant components
  double scale;
  double kappa;
  double max_combination;
  double combination_scale;
  /// Hypotheses of the classification: |C| and |W(., ., ., grad f)|.
  double cotton_norm;
  double radial_weyl_norm;

  double relative() const { return relative_residual(max_abs(residual), scale); }
  double combination_relative() const {
    return relative_residual(max_combination, combination_scale);
  }
};
/// Throws CriticalPoint when |grad f| < 1e-8.
RicciEigenvectorCheck check_ricci_eigenvector(const StructurePoint& p);

struct LevelSetCheck {
  double spread;  // max - min of |grad f|
  double min_gradient;
  double max_gradient;
  /// max over points of the relative residual of
  /// f Ric(e_a, e_1) |grad f| = e_a(|grad f|^2) / 2 + h e_a(f), a = 2..n.
  double max_identity_residual;
};
/// Points must share f within 1e-10 (DomainError otherwise); throws
/// CriticalPoint if |grad f| < 1e-8 at any of them.
LevelSetCheck check_level_set_gradient(const EinsteinTypeStructure& s,
                                       const std::vector<std::vector<double>>& points,
                                       int order = 3);

/// Left side W(dr, d_a, dr, d_b) / g_rr and right side
/// -(Ric_fiber_ab - R_fiber g_fiber_ab / (n-1)) / (n-2) on fiber pairs (a, b),
/// with the right side computed on the fiber chart alone.
struct FiberWeylCheck {
  RealTensor lhs;  // (n-1) x (n-1)
  RealTensor rhs;
  double max_difference;
  double scale;
  double relative() const { return relative_residual(max_difference, scale); }
};
/// `point` is a point of the assembled chart.
FiberWeylCheck check_fiber_einstein_weyl(const WarpedProductChart& w,
                                         std::span<const double> point, int order = 4);

}  // namespace etlab
