#include "etlab/catalog.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>

namespace etlab {
namespace {

std::vector<std::string> numbered(const std::string& prefix, int count, int first = 1) {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) names.push_back(prefix + std::to_string(first + i));
  return names;
}

Expr squared_norm(const MetricChart& chart, int first, int count) {
  Expr s = 0.0;
  for (int i = first; i < first + count; ++i) s = s + pow(chart.coordinate(i), 2);
  return s;
}

Expr squared_norm(const std::vector<std::string>& names, int first, int count) {
  Expr s = 0.0;
  for (int i = first; i < first + count; ++i) s = s + pow(Expr::variable(i, names[i]), 2);
  return s;
}

Box cube(int dim, double lo, double hi) {
  return Box{std::vector<std::pair<double, double>>(dim, {lo, hi})};
}

// x1 in (lo, hi), the rest in (-1, 1)
Box slab(int dim, double lo, double hi) {
  Box b = cube(dim, -1.0, 1.0);
  b.intervals[0] = {lo, hi};
  return b;
}

void require_dim(int n, int lo, int hi, const std::string& what) {
  if (n < lo || n > hi) {
    throw ConfigError(what + " supports n in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "], got " + std::to_string(n));
  }
}

std::vector<double> random_direction(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  double s = 0.0;
  for (;;) {
    s = 0.0;
    for (auto& x : v) {
      x = normal(rng);
      s += x * x;
    }
    if (s > 1e-6) break;
  }
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

// Points of radius `radius` around the origin of a chart of dimension dim.
std::vector<std::vector<double>> sphere_points(Rng& rng, int dim, double radius, int count) {
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < count; ++k) {
    auto v = random_direction(rng, dim);
    for (auto& x : v) x *= radius;
    pts.push_back(std::move(v));
  }
  return pts;
}

// Points with the first coordinate fixed and the others uniform in the box.
std::vector<std::vector<double>> fixed_first(Rng& rng, const Box& box, double first, int count) {
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < count; ++k) {
    std::vector<double> p(box.dim());
    p[0] = first;
    for (int i = 1; i < box.dim(); ++i)
      p[i] = uniform(rng, box.intervals[i].first, box.intervals[i].second);
    pts.push_back(std::move(p));
  }
  return pts;
}

double param(const CatalogParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int int_param(const CatalogParams& params, const std::string& key, int fallback) {
  const double v = param(params, key, fallback);
  if (v != std::floor(v)) throw ConfigError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

// Orthonormal frame (columns) starting from v, by Gram-Schmidt in g.
Eigen::MatrixXd adapted_frame(const RealTensor& g, const Eigen::VectorXd& v) {
  const int n = g.dim();
  Eigen::MatrixXd gm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm(i, j) = g(i, j);
  Eigen::MatrixXd frame(n, n);
  int filled = 0;
  auto push = [&](Eigen::VectorXd w) {
    for (int k = 0; k < filled; ++k) w -= (frame.col(k).dot(gm * w)) * frame.col(k);
    const double norm = std::sqrt(w.dot(gm * w));
    if (norm < 1e-8) return;
    frame.col(filled++) = w / norm;
  };
  push(v);
  for (int i = 0; i < n && filled < n; ++i) push(Eigen::VectorXd::Unit(n, i));
  return frame;
}

const std::vector<std::string> kAllSuites = {"symmetries",  "curvature_identities",
                                             "einstein_type", "lemmas",
                                             "divergences", "algebra",
                                             "classification"};
const std::vector<std::string> kGeometrySuites = {"symmetries", "curvature_identities",
                                                  "algebra", "classification"};

}  // namespace

MetricChart stereographic_sphere(int dim, double half_width, const std::string& prefix,
                                 double radius) {
  const auto names = numbered(prefix, dim);
  const Expr s = squared_norm(names, 0, dim);
  const Expr factor = (4.0 * radius * radius) / pow(1.0 + s, 2);
  return MetricChart::conformally_flat(names, factor, cube(dim, -half_width, half_width));
}

MetricChart WarpedProductChart::assemble() const {
  const int m = fiber.dim();
  const int n = m + 1;
  std::vector<std::string> names{r_name};
  for (const auto& c : fiber.coord_names()) names.push_back(c);
  const Expr warp2 = pow(warp, 2);
  std::vector<std::vector<Expr>> comps(n, std::vector<Expr>(n, Expr(0.0)));
  comps[0][0] = base_factor;
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const Expr& c = fiber.component(a, b);
      if (c.is_constant() && c.node().value == 0.0) continue;
      comps[a + 1][b + 1] = warp2 * c.shift_variables(1, names);
      comps[b + 1][a + 1] = comps[a + 1][b + 1];
    }
  Box box;
  box.intervals.push_back({r_min, r_max});
  for (const auto& iv : fiber.domain().intervals) box.intervals.push_back(iv);
  return MetricChart(std::move(names), std::move(comps), std::move(box));
}

double fiber_einstein_residual(const WarpedProductChart& w,
                               std::span<const double> fiber_point, int order) {
  if (!w.fiber_einstein_constant) return std::numeric_limits<double>::infinity();
  const CurvatureBundle b(w.fiber, fiber_point, order);
  const RealTensor ric = values(b.ricci());
  return max_abs(ric - *w.fiber_einstein_constant * b.metric_value().g);
}

const std::vector<CatalogEntryInfo>& catalog_entries() {
  static const std::vector<CatalogEntryInfo> entries = {
      {"flat_linear", "Euclidean space with a linear potential f = slope * x1 + offset, h = 0",
       "static triple with null cosmological constant (trivial case)",
       {{"n", 4, "dimension (3..6)"}, {"slope", 1, "coefficient of x1"},
        {"offset", 0, "constant term"}}},
      {"sphere_height", "unit round sphere, stereographic chart, f = height function, h = n f",
       "static triple with non-null cosmological constant",
       {{"n", 4, "dimension (4..6)"}}},
      {"cpe_sphere", "unit round sphere with the height function as a CPE solution",
       "critical point equation", {{"n", 4, "dimension (4..6)"}}},
      {"schwarzschild_slice",
       "Riemannian Schwarzschild slice in areal Cartesian coordinates, f = sqrt(1 - r^(2-n))",
       "static vacuum triple; harmonic curvature and zero radial Weyl curvature",
       {{"n", 4, "dimension (4..6)"}}},
      {"example1",
       "static vacuum warped product in the closed form (1 - r^(2-n))^-1 dr^2 + r^2 g_sphere, f = sqrt(1 - r^(2-n))",
       "warped static vacuum solution over the round sphere",
       {{"n", 4, "dimension (4..6)"}, {"delta", 0.3, "distance of r_min from the horizon r = 1"},
        {"r_max", 4, "outer radius"}}},
      {"miao_tam_ball", "Euclidean space, f = -|x|^2 / (2(n-1)), h = 1/(n-1)",
       "Miao-Tam equation", {{"n", 4, "dimension (3..6)"}}},
      {"warped_generic", "dr^2 + (r + amplitude sin r)^2 g_sphere with f = r + r^2/4",
       "warped product with Einstein fiber (not a solution)",
       {{"n", 4, "dimension (4..6)"}, {"amplitude", 0.3, "warp perturbation"}}},
      {"warped_sphere_product", "dr^2 + r^2 (S^2(a) x S^2(b)) in dimension 5, f = r",
       "warped product over a non-Einstein fiber when a != b (not a solution)",
       {{"a", 1, "radius of the first sphere"}, {"b", 2, "radius of the second sphere"}}},
      {"curzon_product",
       "Curzon static vacuum slice in Weyl coordinates (rho, z, phi) times flat R^(n-3)",
       "static vacuum triple that is not conformally flat, with nonzero Cotton tensor and "
       "radial Weyl curvature",
       {{"n", 4, "dimension (3..6)"}, {"mass", 1, "Curzon mass parameter"}}},
  };
  return entries;
}

CatalogStructure make_catalog_structure(const std::string& name, const CatalogParams& params) {
  const auto& entries = catalog_entries();
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const CatalogEntryInfo& e) { return e.name == name; });
  if (it == entries.end()) throw ConfigError("unknown catalog entry '" + name + "'");
  std::set<std::string> known;
  for (const auto& p : it->params) known.insert(p.name);
  for (const auto& [key, value] : params) {
    if (!known.count(key)) {
      throw ConfigError("catalog entry '" + name + "' has no parameter '" + key + "'");
    }
  }
  auto get = [&](const std::string& key) {
    for (const auto& p : it->params)
      if (p.name == key) return param(params, key, p.default_value);
    return 0.0;
  };
  auto get_int = [&](const std::string& key) {
    for (const auto& p : it->params)
      if (p.name == key) return int_param(params, key, static_cast<int>(p.default_value));
    return 0;
  };
  if (name == "flat_linear") return make_flat(get_int("n"), get("slope"), get("offset"));
  if (name == "sphere_height") return make_sphere(get_int("n"));
  if (name == "cpe_sphere") return make_sphere(get_int("n"), CaseTag::kCpe);
  if (name == "schwarzschild_slice") return make_schwarzschild_slice(get_int("n"));
  if (name == "example1") return make_example1(get_int("n"), get("delta"), get("r_max"));
  if (name == "miao_tam_ball") return make_miao_tam(get_int("n"));
  if (name == "warped_generic") return make_warped_generic(get_int("n"), get("amplitude"));
  if (name == "curzon_product") return make_curzon_product(get_int("n"), get("mass"));
  return make_warped_sphere_product(get("a"), get("b"));
}

CatalogStructure make_flat(int n, double slope, double offset) {
  require_dim(n, 3, 6, "flat_linear");
  if (slope == 0.0) throw ConfigError("flat_linear needs a nonzero slope");
  const Box box = slab(n, 0.5, 1.5);
  MetricChart chart = MetricChart::diagonal(numbered("x", n), std::vector<Expr>(n, 1.0), box);
  const Expr f = slope * chart.coordinate(0) + offset;
  CatalogStructure out{"flat_linear", {chart, f, 0.0, CaseTag::kStaticNullLambda, {}}};
  out.default_suites = kAllSuites;
  out.structure.fluid = PerfectFluidCoefficients{0.0, 0.0};
  out.level_set = [box](Rng& rng, int count) {
    return fixed_first(rng, box, uniform(rng, 0.6, 1.4), count);
  };
  return out;
}

CatalogStructure make_sphere(int n, CaseTag tag) {
  require_dim(n, 4, 6, "sphere_height");
  MetricChart chart = stereographic_sphere(n, 0.9 / std::sqrt(double(n)));
  const Expr s = squared_norm(chart, 0, n);
  const Expr f = (1.0 - s) / (1.0 + s);
  const Expr h = double(n) * f;
  CatalogStructure out{tag == CaseTag::kCpe ? "cpe_sphere" : "sphere_height",
                       {chart, f, h, tag, {}}};
  out.default_suites = kAllSuites;
  out.level_set = [n](Rng& rng, int count) {
    return sphere_points(rng, n, uniform(rng, 0.2, 0.8), count);
  };
  return out;
}

CatalogStructure make_schwarzschild_slice(int n) {
  require_dim(n, 4, 6, "schwarzschild_slice");
  const auto names = numbered("x", n);
  const Expr s = squared_norm(names, 0, n);
  const Expr m = pow(sqrt(s), 2 - n);
  const Expr radial = m / ((1.0 - m) * s);
  std::vector<std::vector<Expr>> comps(n, std::vector<Expr>(n, Expr(0.0)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Expr xx = Expr::variable(i, names[i]) * Expr::variable(j, names[j]);
      comps[i][j] = (i == j ? 1.0 + radial * xx : radial * xx);
      comps[j][i] = comps[i][j];
    }
  MetricChart chart(names, std::move(comps), slab(n, 1.4, 3.0));
  const Expr f = sqrt(1.0 - m);
  CatalogStructure out{"schwarzschild_slice", {chart, f, 0.0, CaseTag::kStaticNullLambda, {}}};
  out.default_suites = kAllSuites;
  out.structure.fluid = PerfectFluidCoefficients{0.0, 0.0};
  out.level_set = [n](Rng& rng, int count) { return sphere_points(rng, n, 2.0, count); };
  return out;
}

CatalogStructure make_example1(int n, double delta, double r_max) {
  require_dim(n, 4, 6, "example1");
  if (!(delta > 0.0) || !(r_max > 1.0 + delta)) {
    throw ConfigError("example1 needs delta > 0 and r_max > 1 + delta");
  }
  const Expr r = Expr::variable(0, "r");
  const Expr m = pow(r, 2 - n);
  WarpedProductChart w{1.0 / (1.0 - m), r, "r", 1.0 + delta, r_max,
                       stereographic_sphere(n - 1, 1.0, "y"), double(n - 2)};
  MetricChart chart = w.assemble();
  const Expr f = sqrt(1.0 - m);
  CatalogStructure out{"example1", {chart, f, 0.0, CaseTag::kStaticNullLambda, {}}};
  out.default_suites = kAllSuites;
  out.structure.fluid = PerfectFluidCoefficients{0.0, 0.0};
  out.warped = w;
  const Box box = chart.domain();
  out.level_set = [box](Rng& rng, int count) {
    return fixed_first(rng, box, uniform(rng, box.intervals[0].first, box.intervals[0].second),
                       count);
  };
  return out;
}

CatalogStructure make_miao_tam(int n) {
  require_dim(n, 3, 6, "miao_tam_ball");
  MetricChart chart =
      MetricChart::diagonal(numbered("x", n), std::vector<Expr>(n, 1.0), slab(n, 0.5, 1.5));
  const Expr f = -squared_norm(chart, 0, n) / (2.0 * (n - 1));
  const Expr h = 1.0 / (n - 1);
  CatalogStructure out{"miao_tam_ball", {chart, f, h, CaseTag::kMiaoTam, {}}};
  out.default_suites = kAllSuites;
  out.level_set = [n](Rng& rng, int count) {
    return sphere_points(rng, n, uniform(rng, 0.6, 1.4), count);
  };
  return out;
}

CatalogStructure make_warped_generic(int n, double amplitude) {
  require_dim(n, 4, 6, "warped_generic");
  const Expr r = Expr::variable(0, "r");
  WarpedProductChart w{1.0, r + amplitude * sin(r), "r", 1.0, 3.0,
                       stereographic_sphere(n - 1, 1.0, "y"), double(n - 2)};
  MetricChart chart = w.assemble();
  const Expr f = r + pow(r, 2) / 4.0;
  CatalogStructure out{"warped_generic", {chart, f, 0.0, CaseTag::kGeneric, {}}};
  out.solution = false;
  out.default_suites = kGeometrySuites;
  out.warped = w;
  const Box box = chart.domain();
  out.level_set = [box](Rng& rng, int count) {
    return fixed_first(rng, box, uniform(rng, 1.2, 2.8), count);
  };
  return out;
}

CatalogStructure make_warped_sphere_product(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("sphere radii must be positive");
  const std::vector<std::string> names{"y1", "y2", "z1", "z2"};
  const Expr sy = squared_norm(names, 0, 2);
  const Expr sz = squared_norm(names, 2, 2);
  const Expr fy = (4.0 * a * a) / pow(1.0 + sy, 2);
  const Expr fz = (4.0 * b * b) / pow(1.0 + sz, 2);
  MetricChart fiber = MetricChart::diagonal(names, {fy, fy, fz, fz}, cube(4, -1.0, 1.0));
  std::optional<double> lambda;
  if (a == b) lambda = 1.0 / (a * a);
  const Expr r = Expr::variable(0, "r");
  WarpedProductChart w{1.0, r, "r", 1.0, 3.0, std::move(fiber), lambda};
  MetricChart chart = w.assemble();
  CatalogStructure out{"warped_sphere_product", {chart, r, 0.0, CaseTag::kGeneric, {}}};
  out.solution = false;
  out.level_sets_umbilic_ricci = a == b;
  out.default_suites = kGeometrySuites;
  out.warped = w;
  const Box box = chart.domain();
  out.level_set = [box](Rng& rng, int count) {
    return fixed_first(rng, box, uniform(rng, 1.2, 2.8), count);
  };
  return out;
}

CatalogStructure make_curzon_product(int n, double mass) {
  require_dim(n, 3, 6, "curzon_product");
  if (!(mass > 0.0)) throw ConfigError("curzon_product needs a positive mass");
  std::vector<std::string> names{"rho", "z", "phi"};
  for (const auto& w : numbered("w", n - 3)) names.push_back(w);
  const Expr rho = Expr::variable(0, "rho");
  const Expr z = Expr::variable(1, "z");
  const Expr r2 = pow(rho, 2) + pow(z, 2);
  const Expr u = -mass / sqrt(r2);
  const Expr k = -(mass * mass) * pow(rho, 2) / (2.0 * pow(r2, 2));
  const Expr conf = exp(2.0 * k - 2.0 * u);
  std::vector<Expr> diag{conf, conf, pow(rho, 2) * exp(-2.0 * u)};
  for (int i = 3; i < n; ++i) diag.push_back(1.0);
  Box box = cube(n, -1.0, 1.0);
  box.intervals[0] = {0.6, 1.6};
  box.intervals[2] = {0.0, 1.0};
  MetricChart chart = MetricChart::diagonal(names, diag, box);
  CatalogStructure out{"curzon_product", {chart, exp(u), 0.0, CaseTag::kStaticNullLambda, {}}};
  out.default_suites = {"symmetries", "curvature_identities", "einstein_type", "lemmas",
                        "algebra"};
  return out;
}

RicciEigenvectorCheck check_ricci_eigenvector(const StructurePoint& p) {
  const CurvatureBundle& b = p.bundle();
  const int n = b.dim();
  const MetricValue& mv = b.metric_value();
  const RealTensor df = values(b.gradient(p.f()));
  Eigen::VectorXd v(n), dfv(n);
  for (int i = 0; i < n; ++i) {
    dfv(i) = df(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += mv.g_inv(i, j) * df(j);
    v(i) = s;
  }
  const double grad2 = v.dot(dfv);
  if (!(std::sqrt(std::abs(grad2)) >= 1e-8)) {
    throw CriticalPoint("|grad f| below 1e-8: critical point of the potential");
  }
  const RealTensor ric = values(b.ricci());
  Eigen::MatrixXd ricm(n, n), gm(n, n), gim(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ricm(i, j) = ric(i, j);
      gm(i, j) = mv.g(i, j);
      gim(i, j) = mv.g_inv(i, j);
    }
  const Eigen::VectorXd ric_v = gim * (ricm * v);  // Ric(grad f) as a vector
  const double kappa = v.dot(ricm * v) / grad2;

  RicciEigenvectorCheck out{RealTensor(n, {Variance::kContravariant}, 0.0), 0.0, kappa, 0.0,
                            0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    out.residual(i) = ric_v(i) - kappa * v(i);
    out.scale = std::max({out.scale, std::abs(ric_v(i)), std::abs(kappa * v(i))});
  }

  // frame diagonalizing Ric with respect to g
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(ricm, gm);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const Eigen::MatrixXd frame = eig.eigenvectors();
  const double r = lambda.sum();
  for (int j = 0; j < n; ++j) {
    const double fj = frame.col(j).dot(dfv);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double comb = fj * (lambda(j) + (n - 1) * lambda(i) - r);
      out.max_combination = std::max(out.max_combination, std::abs(comb));
      out.combination_scale =
          std::max(out.combination_scale,
                   std::abs(fj) * std::max({std::abs(lambda(j)), (n - 1) * std::abs(lambda(i)),
                                            std::abs(r)}));
    }
  }
  if (b.order() >= 3) out.cotton_norm = max_abs(values(cotton(b)));
  out.radial_weyl_norm = max_abs(values(radial_weyl(b, p.f())));
  return out;
}

LevelSetCheck check_level_set_gradient(const EinsteinTypeStructure& s,
                                       const std::vector<std::vector<double>>& points,
                                       int order) {
  if (points.empty()) throw ConfigError("level-set check needs at least one point");
  if (order < 2) throw OrderExhausted("level-set check needs jet order 2", 2);
  LevelSetCheck out{0.0, std::numeric_limits<double>::infinity(), 0.0, 0.0};
  const double f0 = s.f.evaluate(points.front());
  for (const auto& pt : points) {
    const CurvatureBundle b(s.chart, pt, order);
    const int n = b.dim();
    const Jet f = b.lift(s.f);
    if (std::abs(f.value() - f0) > 1e-10) {
      throw DomainError("level-set points do not share one value of f");
    }
    const double h = b.lift(s.h).value();
    const JetTensor grad = b.gradient(f);
    const int k = tensor_order(grad);
    const JetTensor& gi = b.inverse_metric(k);
    Jet grad2(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) grad2.add_product(gi(i, j), grad(i) * grad(j));
    const double norm = std::sqrt(grad2.value());
    if (!(norm >= 1e-8)) throw CriticalPoint("|grad f| below 1e-8 on the level set");
    out.min_gradient = std::min(out.min_gradient, norm);
    out.max_gradient = std::max(out.max_gradient, norm);

    const RealTensor df = values(grad);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += b.metric_value().g_inv(i, j) * df(j);
      v(i) = acc;
    }
    const Eigen::MatrixXd e = adapted_frame(b.metric_value().g, v);
    const RealTensor ric = values(b.ricci());
    Eigen::VectorXd d_grad2(n);
    for (int i = 0; i < n; ++i) d_grad2(i) = grad2.derivative(i).value();
    for (int a = 1; a < n; ++a) {
      double ric_a1 = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ric_a1 += ric(i, j) * e(i, a) * e(j, 0);
      double ea_f = 0.0;
      for (int i = 0; i < n; ++i) ea_f += e(i, a) * df(i);
      const double lhs = f.value() * ric_a1 * norm;
      const double half = 0.5 * e.col(a).dot(d_grad2);
      const double res = lhs - half - h * ea_f;
      out.max_identity_residual =
          std::max(out.max_identity_residual,
                   relative_residual(std::abs(res), std::max({std::abs(lhs), std::abs(half),
                                                              std::abs(h * ea_f)})));
    }
  }
  out.spread = out.max_gradient - out.min_gradient;
  return out;
}

FiberWeylCheck check_fiber_einstein_weyl(const WarpedProductChart& w,
                                         std::span<const double> point, int order) {
  const MetricChart chart = w.assemble();
  const int n = chart.dim();
  const int m = n - 1;
  if (n < 4) throw UnsupportedDimension("fiber Weyl check needs dimension >= 4");
  const CurvatureBundle total(chart, point, order);
  const RealTensor wt = values(weyl(total));
  const double g_rr = total.metric_value().g(0, 0);

  const CurvatureBundle fiber(w.fiber, point.subspan(1), order);
  const RealTensor ric = values(fiber.ricci());
  const double rf = fiber.scalar_curvature().value();
  const RealTensor& gf = fiber.metric_value().g;

  FiberWeylCheck out{RealTensor::covariant(m, 2, 0.0), RealTensor::covariant(m, 2, 0.0), 0.0,
                     0.0};
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) {
      out.lhs(a, c) = wt(0, a + 1, 0, c + 1) / g_rr;
      out.rhs(a, c) = -(ric(a, c) - rf * gf(a, c) / (n - 1)) / (n - 2);
      out.max_difference = std::max(out.max_difference, std::abs(out.lhs(a, c) - out.rhs(a, c)));
      out.scale = std::max({out.scale, std::abs(out.lhs(a, c)), std::abs(out.rhs(a, c))});
    }
  return out;
}

}  // namespace etlab
