#include "etlab/geometry.hpp"

#include <sstream>

namespace etlab {
namespace {

constexpr Variance kCo = Variance::kCovariant;
constexpr Variance kContra = Variance::kContravariant;

std::string format_point(std::span<const double> point) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
  os << ")";
  return os.str();
}

JetTensor jet_tensor(int dim, std::vector<Variance> v, int order) {
  return JetTensor(dim, std::move(v), Jet(dim, order));
}

JetTensor covariant_jets(int dim, int rank, int order) {
  return JetTensor::covariant(dim, rank, Jet(dim, order));
}

}  // namespace

bool Box::contains(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!(point[i] > intervals[i].first && point[i] < intervals[i].second)) return false;
  }
  return true;
}

MetricChart::MetricChart(std::vector<std::string> coords,
                         std::vector<std::vector<Expr>> components, Box domain)
    : coords_(std::move(coords)),
      components_(std::move(components)),
      domain_(std::move(domain)) {
  const int n = dim();
  if (n < 1) throw ConfigError("chart needs at least one coordinate");
  if (static_cast<int>(components_.size()) != n) {
    throw ConfigError("metric must have " + std::to_string(n) + " rows");
  }
  for (const auto& row : components_) {
    if (static_cast<int>(row.size()) != n) {
      throw ConfigError("metric must have " + std::to_string(n) + " columns");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (&components_[i][j].node() != &components_[j][i].node() &&
          components_[i][j].to_string() != components_[j][i].to_string()) {
        throw ConfigError("metric component (" + coords_[i] + ", " + coords_[j] +
                          ") differs from its transpose");
      }
      components_[j][i] = components_[i][j];
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (components_[i][j].max_variable() >= n) {
        throw ConfigError("metric component references an unknown coordinate");
      }
    }
  if (domain_.dim() != n) {
    throw ConfigError("domain box has " + std::to_string(domain_.dim()) +
                      " intervals for a " + std::to_string(n) + "-dimensional chart");
  }
  for (const auto& [lo, hi] : domain_.intervals) {
    if (!(lo < hi)) throw ConfigError("degenerate domain interval");
  }
}

MetricChart MetricChart::diagonal(std::vector<std::string> coords,
                                  const std::vector<Expr>& diagonal, Box domain) {
  const int n = static_cast<int>(coords.size());
  std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr(0.0)));
  for (int i = 0; i < n; ++i) g[i][i] = diagonal.at(i);
  return MetricChart(std::move(coords), std::move(g), std::move(domain));
}

MetricChart MetricChart::conformally_flat(std::vector<std::string> coords,
                                          const Expr& factor, Box domain) {
  const std::size_t n = coords.size();
  return diagonal(std::move(coords), std::vector<Expr>(n, factor), std::move(domain));
}

MetricValue MetricChart::metric_at(std::span<const double> point) const {
  const int n = dim();
  RealTensor g = RealTensor::covariant(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g(i, j) = g(j, i) = components_[i][j].evaluate(point);
  try {
    return MetricValue::from_matrix(g);
  } catch (const SingularMetric& e) {
    throw SingularMetric(std::string(e.what()) + " at point " + format_point(point));
  }
}

CurvatureBundle::CurvatureBundle(const MetricChart& chart,
                                 std::span<const double> point, int order)
    : dim_(chart.dim()),
      order_(order),
      point_(point.begin(), point.end()),
      metric_value_(chart.metric_at(point)),
      metric_(covariant_jets(chart.dim(), 2, std::max(order, 0))),
      riemann_(covariant_jets(chart.dim(), 4, 0)),
      ricci_(covariant_jets(chart.dim(), 2, 0)),
      scalar_(chart.dim(), 0) {
  if (static_cast<int>(point.size()) != dim_) {
    throw ShapeMismatch("point has " + std::to_string(point.size()) +
                        " coordinates for a " + std::to_string(dim_) + "-dimensional chart");
  }
  require_order(2, "curvature");
  const int n = dim_;
  const int k = order_;

  JetEvaluator ev(point_, k);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) metric_(i, j) = metric_(j, i) = ev.lift(chart.component(i, j));

  // g^{-1} = sum_m (-G0 P)^m G0 with g = g0 + P and P nilpotent.
  const RealTensor& g0inv = metric_value_.g_inv;
  JetTensor a = jet_tensor(n, {kContra, kCo}, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        Jet p = metric_(l, j);
        p.coefficients()[0] = 0.0;
        a(i, j).add_scaled(p, -g0inv(i, l));
      }
  JetTensor term = jet_tensor(n, {kContra, kContra}, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) term(i, j) += g0inv(i, j);
  JetTensor inverse = term;
  for (int m = 1; m <= k; ++m) {
    JetTensor next = jet_tensor(n, {kContra, kContra}, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) next(i, j).add_product(a(i, l), term(l, j));
    term = std::move(next);
    inverse = inverse + term;
  }
  inverse_.reserve(k + 1);
  for (int o = 0; o <= k; ++o) inverse_.push_back(truncated(inverse, o));

  // dg(c, a, b) = d_c g_ab
  JetTensor dg = covariant_jets(n, 3, k - 1);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(c, i, j) = metric_(i, j).derivative(c);

  JetTensor gamma = jet_tensor(n, {kContra, kCo, kCo}, k - 1);
  const JetTensor& ginv = inverse_[k - 1];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        Jet first_kind = dg(i, l, j) + dg(j, l, i) - dg(l, i, j);
        for (int m = 0; m < n; ++m) gamma(m, i, j).add_product(ginv(m, l), first_kind);
      }
      for (int m = 0; m < n; ++m) {
        gamma(m, i, j) *= 0.5;
        gamma(m, j, i) = gamma(m, i, j);
      }
    }
  christoffel_.reserve(k);
  for (int o = 0; o < k; ++o) christoffel_.push_back(truncated(gamma, o));

  // R^m_ijl = d_i Gamma^m_jl - d_j Gamma^m_il + Gamma^m_ip Gamma^p_jl - Gamma^m_jp Gamma^p_il
  const JetTensor& g2 = christoffel_[k - 2];
  JetTensor up = jet_tensor(n, {kContra, kCo, kCo, kCo}, k - 2);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          Jet r = gamma(m, j, l).derivative(i) - gamma(m, i, l).derivative(j);
          for (int p = 0; p < n; ++p) {
            r.add_product(g2(m, i, p), g2(p, j, l));
            Jet neg = -g2(m, j, p);
            r.add_product(neg, g2(p, i, l));
          }
          up(m, j, i, l) = -r;
          up(m, i, j, l) = std::move(r);
        }
  const JetTensor& gk2 = truncated(metric_, k - 2);
  riemann_ = covariant_jets(n, 4, k - 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) riemann_(i, j, kk, l).add_product(gk2(kk, m), up(m, i, j, l));

  ricci_ = trace(riemann_, 0, 2);
  scalar_ = trace(ricci_, 0, 1)[0];
}

void CurvatureBundle::require_order(int required, const std::string& what) const {
  if (order_ < required) {
    throw OrderExhausted(what + " needs jet order >= " + std::to_string(required) +
                             ", configured order is " + std::to_string(order_),
                         required);
  }
}

Jet CurvatureBundle::lift(const Expr& expr) const {
  return etlab::lift(expr, point_, order_);
}

JetTensor CurvatureBundle::covariant_derivative(const JetTensor& t) const {
  const int n = dim_;
  const int r = t.rank();
  for (auto v : t.variances()) {
    if (v != kCo) throw ShapeMismatch("covariant_derivative expects a fully covariant tensor");
  }
  const int k = tensor_order(t);
  if (k < 1) {
    throw OrderExhausted("covariant derivative of a jet tensor of order 0; increase the jet order", 1);
  }
  const JetTensor low = truncated(t, k - 1);
  const JetTensor& gamma = christoffel_[k - 1];
  JetTensor out = covariant_jets(n, r + 1, k - 1);
  std::vector<int> idx(r + 1), src(r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, idx);
    const int m = idx[0];
    std::copy(idx.begin() + 1, idx.end(), src.begin());
    Jet acc(n, k - 1);
    for (int s = 0; s < r; ++s) {
      const int is = src[s];
      for (int p = 0; p < n; ++p) {
        src[s] = p;
        acc.add_product(gamma(p, m, is), low.at(src));
      }
      src[s] = is;
    }
    out[f] = t.at(src).derivative(m) - acc;
  }
  return out;
}

JetTensor CurvatureBundle::trace(const JetTensor& t, int slot_a, int slot_b) const {
  const int r = t.rank();
  if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r) {
    throw ShapeMismatch("invalid trace slots");
  }
  const int k = tensor_order(t);
  const JetTensor& gi = inverse_[k];
  std::vector<Variance> rest;
  for (int s = 0; s < r; ++s)
    if (s != slot_a && s != slot_b) rest.push_back(t.variances()[s]);
  JetTensor out = jet_tensor(dim_, rest, k);
  std::vector<int> oidx(r - 2), idx(r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, oidx);
    for (int s = 0, o = 0; s < r; ++s)
      if (s != slot_a && s != slot_b) idx[s] = oidx[o++];
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) {
        idx[slot_a] = a;
        idx[slot_b] = b;
        const Jet& tv = t.at(idx);
        if (tv.order() != k) out[f].add_product(gi(a, b), tv.truncated(k));
        else out[f].add_product(gi(a, b), tv);
      }
  }
  return out;
}

JetTensor CurvatureBundle::divergence(const JetTensor& t, int slot) const {
  return trace(covariant_derivative(t), 0, slot + 1);
}

JetTensor CurvatureBundle::contract_vector(const JetTensor& t, int slot,
                                           const JetTensor& v) const {
  const int k = std::min(tensor_order(t), tensor_order(v));
  const JetTensor& gi = inverse_[k];
  const JetTensor tt = truncated(t, k);
  const JetTensor vv = truncated(v, k);
  std::vector<Jet> up(dim_, Jet(dim_, k));
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) up[a].add_product(gi(a, b), vv(b));
  const int r = t.rank();
  std::vector<Variance> rest;
  for (int s = 0; s < r; ++s)
    if (s != slot) rest.push_back(t.variances()[s]);
  JetTensor out = jet_tensor(dim_, rest, k);
  std::vector<int> oidx(r - 1), idx(r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, oidx);
    for (int s = 0, o = 0; s < r; ++s)
      if (s != slot) idx[s] = oidx[o++];
    for (int a = 0; a < dim_; ++a) {
      idx[slot] = a;
      out[f].add_product(tt.at(idx), up[a]);
    }
  }
  return out;
}

JetTensor CurvatureBundle::gradient(const Jet& f) const {
  if (f.order() < 1) throw OrderExhausted("gradient of a jet of order 0", 1);
  JetTensor out = covariant_jets(dim_, 1, f.order() - 1);
  for (int i = 0; i < dim_; ++i) out(i) = f.derivative(i);
  return out;
}

JetTensor CurvatureBundle::hessian(const Jet& f) const {
  return covariant_derivative(gradient(f));
}

Jet CurvatureBundle::laplacian(const Jet& f) const { return trace(hessian(f), 0, 1)[0]; }

JetTensor truncated(const JetTensor& t, int order) {
  JetTensor out = t;
  for (auto& c : out.data())
    if (c.order() != order) c = c.truncated(order);
  return out;
}

int tensor_order(const JetTensor& t) {
  int k = t[0].order();
  for (const auto& c : t.data()) k = std::min(k, c.order());
  return k;
}

JetTensor scaled(const JetTensor& t, const Jet& s) {
  const int k = std::min(tensor_order(t), s.order());
  const Jet ss = s.truncated(k);
  JetTensor out = truncated(t, k);
  for (auto& c : out.data()) c = c * ss;
  return out;
}

JetTensor scaled(const JetTensor& t, double s) {
  JetTensor out = t;
  for (auto& c : out.data()) c *= s;
  return out;
}

JetTensor operator+(const JetTensor& a, const JetTensor& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) throw ShapeMismatch("tensor shapes differ");
  const int k = std::min(tensor_order(a), tensor_order(b));
  JetTensor out = truncated(a, k);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f] += b[f].order() == k ? b[f] : b[f].truncated(k);
  }
  return out;
}

JetTensor operator-(const JetTensor& a, const JetTensor& b) {
  return a + scaled(b, -1.0);
}

JetTensor weyl(const CurvatureBundle& b, bool* dimension_warning) {
  const int n = b.dim();
  const int k = b.order() - 2;
  if (dimension_warning) *dimension_warning = (n == 3);
  JetTensor w = covariant_jets(n, 4, k);
  if (n <= 3) return w;
  const JetTensor& rm = b.riemann();
  const JetTensor& ric = b.ricci();
  const JetTensor g = truncated(b.metric(), k);
  const Jet& r = b.scalar_curvature();
  const double c1 = 1.0 / (n - 2);
  const double c2 = 1.0 / ((n - 1.0) * (n - 2.0));
  const Jet rs = r * c2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk)
        for (int l = 0; l < n; ++l) {
          Jet ric_g = ric(i, kk) * g(j, l) - ric(i, l) * g(j, kk) +
                      ric(j, l) * g(i, kk) - ric(j, kk) * g(i, l);
          Jet gg = g(i, kk) * g(j, l) - g(i, l) * g(j, kk);
          Jet v = rm(i, j, kk, l);
          v.add_scaled(ric_g, -c1);
          v.add_product(rs, gg);
          w(i, j, kk, l) = std::move(v);
        }
  return w;
}

JetTensor cotton(const CurvatureBundle& b) {
  b.require_order(3, "Cotton tensor");
  const int n = b.dim();
  const JetTensor dric = b.covariant_derivative(b.ricci());
  const JetTensor dr = b.gradient(b.scalar_curvature());
  const int k = tensor_order(dric);
  const JetTensor g = truncated(b.metric(), k);
  const double c = 1.0 / (2.0 * (n - 1));
  JetTensor out = covariant_jets(n, 3, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk) {
        Jet v = dric(i, j, kk) - dric(j, i, kk);
        Jet trace_part = dr(i) * g(j, kk) - dr(j) * g(i, kk);
        v.add_scaled(trace_part, -c);
        out(i, j, kk) = std::move(v);
      }
  return out;
}

namespace {

// R^kl W_ikjl
JetTensor ricci_weyl(const CurvatureBundle& b, const JetTensor& w) {
  const int n = b.dim();
  const JetTensor ric_up = [&] {
    const JetTensor& ric = b.ricci();
    const int k = tensor_order(ric);
    const JetTensor& gi = b.inverse_metric(k);
    JetTensor up = jet_tensor(n, {kContra, kContra}, k);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            Jet gg = gi(a, p) * gi(c, q);
            up(a, c).add_product(gg, ric(p, q));
          }
    return up;
  }();
  const int k = tensor_order(w);
  JetTensor out = covariant_jets(n, 2, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk)
        for (int l = 0; l < n; ++l) out(i, j).add_product(ric_up(kk, l), w(i, kk, j, l));
  return out;
}

void require_weyl_dimension(const CurvatureBundle& b, const char* what) {
  if (b.dim() <= 3) {
    throw UnsupportedDimension(std::string(what) + " needs dimension >= 4 (divides by n-3), got " +
                               std::to_string(b.dim()));
  }
}

}  // namespace

BachForms bach(const CurvatureBundle& b) {
  require_weyl_dimension(b, "Bach tensor");
  b.require_order(4, "Bach tensor");
  const int n = b.dim();
  const JetTensor w = weyl(b);
  const JetTensor rw = ricci_weyl(b, w);
  // grad^l W_ikjl -> (i, k, j), then grad^k on slot 1 -> (i, j)
  const JetTensor ddw = b.divergence(b.divergence(w, 3), 1);
  const JetTensor weyl_form = scaled(ddw, 1.0 / (n - 3)) + scaled(rw, 1.0 / (n - 2));
  const JetTensor dc = b.divergence(cotton(b), 1);
  const JetTensor cotton_form = scaled(dc, -1.0 / (n - 2)) + scaled(rw, 1.0 / (n - 2));
  return {weyl_form, cotton_form};
}

JetTensor div_weyl(const CurvatureBundle& b, int k) {
  require_weyl_dimension(b, "Weyl divergence");
  if (k < 1 || k > 4) throw ConfigError("Weyl divergence depth must be in 1..4");
  b.require_order(2 + k, "Weyl divergence of depth " + std::to_string(k));
  JetTensor t = b.divergence(weyl(b), 3);  // (j, k, i)
  if (k >= 2) t = b.divergence(t, 0);      // (k, i)
  if (k >= 3) t = b.divergence(t, 1);      // (k)
  if (k >= 4) t = b.divergence(t, 0);      // scalar
  return t;
}

JetTensor radial_weyl(const CurvatureBundle& b, const Jet& f) {
  return b.contract_vector(weyl(b), 3, b.gradient(f));
}

JetTensor t_tensor(const CurvatureBundle& b, const Jet& f) {
  const int n = b.dim();
  if (n < 3) throw UnsupportedDimension("T tensor needs dimension >= 3");
  const int k = b.order() - 2;
  const JetTensor grad = truncated(b.gradient(f), k);
  const JetTensor& ric = b.ricci();
  const Jet& r = b.scalar_curvature();
  const JetTensor g = truncated(b.metric(), k);
  const JetTensor ric_grad = b.contract_vector(ric, 1, grad);  // R_jl grad^l f
  const double c1 = 1.0 / (n - 2);
  const double c3 = (n - 1.0) / (n - 2);
  const Jet rs = r * c1;
  JetTensor out = covariant_jets(n, 3, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk) {
        Jet a = ric_grad(j) * g(i, kk) - ric_grad(i) * g(j, kk);
        Jet bb = grad(i) * g(j, kk) - grad(j) * g(i, kk);
        Jet c = grad(j) * ric(i, kk) - grad(i) * ric(j, kk);
        Jet v = a * c1;
        v.add_product(rs, bb);
        v.add_scaled(c, c3);
        out(i, j, kk) = std::move(v);
      }
  return out;
}

RicciIdentityResidual ricci_identity_residual(const CurvatureBundle& b, const Jet& u) {
  b.require_order(3, "Ricci identity check");
  const int n = b.dim();
  const RealTensor d3 = values(b.covariant_derivative(b.hessian(u)));
  const RealTensor rm = values(b.riemann());
  const RealTensor& gi = b.metric_value().g_inv;
  std::vector<double> grad_up(n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) grad_up[l] += gi(l, m) * u.derivative(m).value();
  RealTensor res = RealTensor::covariant(n, 3, 0.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double curv = 0.0;
        for (int l = 0; l < n; ++l) curv += rm(i, j, k, l) * grad_up[l];
        res(i, j, k) = d3(i, j, k) - d3(j, i, k) - curv;
        scale = std::max({scale, std::abs(d3(i, j, k)), std::abs(curv)});
      }
  return {std::move(res), scale};
}

CurvatureSymmetryReport curvature_symmetries(const CurvatureBundle& b) {
  const int n = b.dim();
  const RealTensor rm = values(b.riemann());
  CurvatureSymmetryReport r{};
  r.riemann_scale = max_abs(rm);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = rm(i, j, k, l);
          r.riemann_antisymmetry = std::max({r.riemann_antisymmetry, std::abs(v + rm(j, i, k, l)),
                                             std::abs(v + rm(i, j, l, k))});
          r.riemann_pair_symmetry = std::max(r.riemann_pair_symmetry, std::abs(v - rm(k, l, i, j)));
          r.first_bianchi = std::max(r.first_bianchi,
                                     std::abs(v + rm(j, k, i, l) + rm(k, i, j, l)));
        }
  if (b.order() >= 3) {
    const RealTensor div_ric = values(b.divergence(b.ricci(), 0));
    const RealTensor dr = values(b.gradient(b.scalar_curvature()));
    r.contracted_bianchi_scale = std::max(max_abs(div_ric), 0.5 * max_abs(dr));
    for (int i = 0; i < n; ++i) {
      r.contracted_bianchi = std::max(r.contracted_bianchi, std::abs(div_ric(i) - 0.5 * dr(i)));
    }
  }
  r.metric_compatibility = max_abs(values(b.covariant_derivative(b.metric())));
  return r;
}

void verify_sign_convention() {
  const std::vector<std::string> coords{"x", "y", "z"};
  const Box box{{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
  const Expr x = Expr::variable(0, "x"), y = Expr::variable(1, "y"), z = Expr::variable(2, "z");
  const Expr rho2 = x * x + y * y + z * z;
  const MetricChart sphere = MetricChart::conformally_flat(coords, 4.0 / pow(1.0 + rho2, 2), box);
  const MetricChart flat = MetricChart::conformally_flat(coords, 1.0, box);
  const Expr u = x + 0.3 * y * y + x * y * z - 0.2 * z * z * z;
  const std::vector<double> p{0.2, -0.3, 0.4};
  for (const MetricChart* chart : {&flat, &sphere}) {
    CurvatureBundle b(*chart, p, 3);
    const auto res = ricci_identity_residual(b, b.lift(u));
    if (!(res.relative() < 1e-9)) {
      throw Error("Riemann sign convention self-test failed: Ricci identity residual " +
                  std::to_string(res.relative()));
    }
  }
  // The sphere must have positive scalar curvature 6 in this convention.
  CurvatureBundle b(sphere, p, 2);
  if (std::abs(b.scalar_curvature().value() - 6.0) > 1e-9) {
    throw Error("Riemann sign convention self-test failed: unit 3-sphere has R = " +
                std::to_string(b.scalar_curvature().value()));
  }
}

}  // namespace etlab
