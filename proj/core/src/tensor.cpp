#include "etlab/tensor.hpp"

#include <Eigen/Dense>

namespace etlab {
namespace {

void require_same_shape(const RealTensor& a, const RealTensor& b) {
  if (a.dim() != b.dim() || a.variances() != b.variances()) {
    throw ShapeMismatch("tensor shapes differ");
  }
}

Eigen::MatrixXd to_matrix(const RealTensor& t) {
  Eigen::MatrixXd m(t.dim(), t.dim());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) m(i, j) = t(i, j);
  return m;
}

// Contract slot `slot` of t with matrix m: result(.., a, ..) = sum_b m(a, b) t(.., b, ..).
RealTensor apply_to_slot(const RealTensor& t, int slot, const RealTensor& m,
                         Variance new_variance) {
  auto variances = t.variances();
  variances[slot] = new_variance;
  RealTensor out(t.dim(), variances, 0.0);
  const int n = t.dim();
  std::vector<int> idx(t.rank());
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, idx);
    const int a = idx[slot];
    double sum = 0.0;
    for (int b = 0; b < n; ++b) {
      idx[slot] = b;
      sum += m(a, b) * t.at(idx);
    }
    out[f] = sum;
  }
  return out;
}

}  // namespace

MetricValue MetricValue::from_matrix(const RealTensor& g) {
  if (g.rank() != 2) throw ShapeMismatch("metric must have rank 2");
  const int n = g.dim();
  Eigen::MatrixXd m = to_matrix(g);
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale)) {
    throw SingularMetric("metric is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw SingularMetric("metric is not positive-definite");
  }
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  double det = 1.0;
  for (int i = 0; i < n; ++i) det *= llt.matrixL()(i, i);
  RealTensor gi(n, {Variance::kContravariant, Variance::kContravariant}, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gi(i, j) = 0.5 * (inv(i, j) + inv(j, i));
  RealTensor gc(n, {Variance::kCovariant, Variance::kCovariant}, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gc(i, j) = m(i, j);
  return MetricValue{std::move(gc), std::move(gi), det};
}

MetricValue MetricValue::euclidean(int dim) {
  RealTensor g = RealTensor::covariant(dim, 2, 0.0);
  for (int i = 0; i < dim; ++i) g(i, i) = 1.0;
  return from_matrix(g);
}

RealTensor values(const JetTensor& t) {
  RealTensor out(t.dim(), t.variances(), 0.0);
  for (std::size_t f = 0; f < t.size(); ++f) out[f] = t[f].value();
  return out;
}

double max_abs(const RealTensor& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const RealTensor& a, const RealTensor& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) {
    throw ShapeMismatch("tensor shapes differ");
  }
  double m = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) m = std::max(m, std::abs(a[f] - b[f]));
  return m;
}

RealTensor operator+(const RealTensor& a, const RealTensor& b) {
  require_same_shape(a, b);
  RealTensor out = a;
  for (std::size_t f = 0; f < out.size(); ++f) out[f] += b[f];
  return out;
}

RealTensor operator-(const RealTensor& a, const RealTensor& b) {
  require_same_shape(a, b);
  RealTensor out = a;
  for (std::size_t f = 0; f < out.size(); ++f) out[f] -= b[f];
  return out;
}

RealTensor operator*(double s, const RealTensor& a) {
  RealTensor out = a;
  for (auto& v : out.data()) v *= s;
  return out;
}

RealTensor contract(const RealTensor& t, int slot_a, int slot_b,
                    const MetricValue* metric) {
  const int r = t.rank();
  if (slot_a < 0 || slot_a >= r || slot_b < 0 || slot_b >= r) {
    throw ShapeMismatch("contraction slot out of range");
  }
  if (slot_a == slot_b) throw ShapeMismatch("contraction slots must differ");
  if (slot_a > slot_b) std::swap(slot_a, slot_b);
  const Variance va = t.variances()[slot_a];
  const Variance vb = t.variances()[slot_b];
  const RealTensor* pairing = nullptr;
  if (va == vb) {
    if (metric == nullptr) {
      throw ShapeMismatch("contracting two slots of the same variance needs a metric");
    }
    pairing = va == Variance::kCovariant ? &metric->g_inv : &metric->g;
  }

  std::vector<Variance> rest;
  for (int s = 0; s < r; ++s)
    if (s != slot_a && s != slot_b) rest.push_back(t.variances()[s]);
  RealTensor out(t.dim(), rest, 0.0);
  const int n = t.dim();
  std::vector<int> oidx(r - 2), idx(r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, oidx);
    for (int s = 0, o = 0; s < r; ++s)
      if (s != slot_a && s != slot_b) idx[s] = oidx[o++];
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      idx[slot_a] = a;
      if (pairing) {
        for (int b = 0; b < n; ++b) {
          const double w = (*pairing)(a, b);
          if (w == 0.0) continue;
          idx[slot_b] = b;
          sum += w * t.at(idx);
        }
      } else {
        idx[slot_b] = a;
        sum += t.at(idx);
      }
    }
    out[f] = sum;
  }
  return out;
}

RealTensor raise(const RealTensor& t, int slot, const MetricValue& metric) {
  if (slot < 0 || slot >= t.rank()) throw ShapeMismatch("slot out of range");
  if (t.variances()[slot] != Variance::kCovariant) {
    throw ShapeMismatch("raise: slot " + std::to_string(slot) + " is not covariant");
  }
  return apply_to_slot(t, slot, metric.g_inv, Variance::kContravariant);
}

RealTensor lower(const RealTensor& t, int slot, const MetricValue& metric) {
  if (slot < 0 || slot >= t.rank()) throw ShapeMismatch("slot out of range");
  if (t.variances()[slot] != Variance::kContravariant) {
    throw ShapeMismatch("lower: slot " + std::to_string(slot) + " is not contravariant");
  }
  return apply_to_slot(t, slot, metric.g, Variance::kCovariant);
}

double inner_product(const RealTensor& a, const RealTensor& b,
                     const MetricValue& metric) {
  require_same_shape(a, b);
  RealTensor bb = b;
  for (int s = 0; s < b.rank(); ++s) {
    bb = b.variances()[s] == Variance::kCovariant ? raise(bb, s, metric)
                                                   : lower(bb, s, metric);
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) sum += a[f] * bb[f];
  return sum;
}

RealTensor outer(const RealTensor& a, const RealTensor& b) {
  if (a.dim() != b.dim()) throw ShapeMismatch("tensor dimensions differ");
  auto v = a.variances();
  v.insert(v.end(), b.variances().begin(), b.variances().end());
  RealTensor out(a.dim(), v, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

RealTensor permute(const RealTensor& t, std::span<const int> perm) {
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw ShapeMismatch("bad permutation");
  std::vector<Variance> v(r);
  for (int s = 0; s < r; ++s) v[s] = t.variances()[perm[s]];
  RealTensor out(t.dim(), v, 0.0);
  std::vector<int> idx(r), src(r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflatten(f, idx);
    for (int s = 0; s < r; ++s) src[perm[s]] = idx[s];
    out[f] = t.at(src);
  }
  return out;
}

CottonSymmetryReport check_cotton_symmetries(const RealTensor& c,
                                             const MetricValue& metric) {
  if (c.rank() != 3) throw ShapeMismatch("Cotton-type tensor must have rank 3");
  const int n = c.dim();
  CottonSymmetryReport r{0.0, 0.0, 0.0, max_abs(c)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        r.antisymmetry = std::max(r.antisymmetry, std::abs(c(i, j, k) + c(j, i, k)));
        r.cyclic = std::max(r.cyclic, std::abs(c(i, j, k) + c(j, k, i) + c(k, i, j)));
      }
  for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    r.trace = std::max(r.trace, max_abs(contract(c, a, b, &metric)));
  }
  return r;
}

RealTensor t_tensor(const RealTensor& ricci, double scalar,
                    const RealTensor& grad, const MetricValue& metric) {
  const int n = ricci.dim();
  if (n < 3) throw UnsupportedDimension("T tensor needs dimension >= 3");
  const RealTensor& g = metric.g;
  // S(v)_j = S_jl v^l
  std::vector<double> sv(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) sv[j] += ricci(j, l) * metric.g_inv(l, m) * grad(m);
  const double c1 = 1.0 / (n - 2);
  const double c2 = scalar / (n - 2);
  const double c3 = (n - 1.0) / (n - 2);
  RealTensor t = RealTensor::covariant(n, 3, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        t(i, j, k) = c1 * (sv[j] * g(i, k) - sv[i] * g(j, k)) +
                     c2 * (grad(i) * g(j, k) - grad(j) * g(i, k)) +
                     c3 * (grad(j) * ricci(i, k) - grad(i) * ricci(j, k));
      }
  return t;
}

}  // namespace etlab
