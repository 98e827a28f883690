#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etlab/errors.hpp"
#include "etlab/jet.hpp"

namespace etlab {

enum class Variance { kCovariant, kContravariant };

/// Dense multi-index array with index-variance metadata. Components are
/// stored row-major: the first index varies slowest.
template <class Scalar>
class ComponentTensor {
 public:
  ComponentTensor(int dim, std::vector<Variance> variances, const Scalar& fill)
      : dim_(dim), variances_(std::move(variances)) {
    if (dim < 1) throw ShapeMismatch("tensor dimension must be positive");
    std::size_t count = 1;
    for (std::size_t i = 0; i < variances_.size(); ++i) count *= dim;
    data_.assign(count, fill);
  }

  /// Fully covariant tensor of the given rank.
  static ComponentTensor covariant(int dim, int rank, const Scalar& fill) {
    return ComponentTensor(dim, std::vector<Variance>(rank, Variance::kCovariant), fill);
  }

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(variances_.size()); }
  const std::vector<Variance>& variances() const noexcept { return variances_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<Scalar> data() noexcept { return data_; }
  std::span<const Scalar> data() const noexcept { return data_; }

  std::size_t flat_index(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) {
      throw ShapeMismatch("index of length " + std::to_string(idx.size()) +
                          " for a rank-" + std::to_string(rank()) + " tensor");
    }
    std::size_t f = 0;
    for (int i : idx) {
      if (i < 0 || i >= dim_) throw ShapeMismatch("tensor index out of range");
      f = f * dim_ + static_cast<std::size_t>(i);
    }
    return f;
  }

  /// Inverse of flat_index.
  void unflatten(std::size_t flat, std::span<int> idx) const {
    for (int s = rank() - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(flat % dim_);
      flat /= dim_;
    }
  }

  Scalar& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
  const Scalar& at(std::span<const int> idx) const { return data_[flat_index(idx)]; }

  template <class... I>
  Scalar& operator()(I... idx) {
    const std::array<int, sizeof...(I)> a{static_cast<int>(idx)...};
    return data_[flat_unchecked(a)];
  }
  template <class... I>
  const Scalar& operator()(I... idx) const {
    const std::array<int, sizeof...(I)> a{static_cast<int>(idx)...};
    return data_[flat_unchecked(a)];
  }

  Scalar& operator[](std::size_t flat) { return data_[flat]; }
  const Scalar& operator[](std::size_t flat) const { return data_[flat]; }

 private:
  template <std::size_t N>
  std::size_t flat_unchecked(const std::array<int, N>& a) const {
    std::size_t f = 0;
    for (int i : a) f = f * dim_ + static_cast<std::size_t>(i);
    return f;
  }

  int dim_;
  std::vector<Variance> variances_;
  std::vector<Scalar> data_;
};

using RealTensor = ComponentTensor<double>;
using JetTensor = ComponentTensor<Jet>;

/// Symmetric positive-definite metric at a point with its inverse.
struct MetricValue {
  RealTensor g;
  RealTensor g_inv;
  double sqrt_det;

  /// Inverts and checks `g` (rank 2, symmetric, positive-definite);
  /// throws SingularMetric otherwise.
  static MetricValue from_matrix(const RealTensor& g);
  static MetricValue euclidean(int dim);
  int dim() const noexcept { return g.dim(); }
};

/// Degree-0 values of a jet tensor.
RealTensor values(const JetTensor& t);

double max_abs(const RealTensor& t);
/// Max of |a - b| over components; shapes must agree.
double max_abs_difference(const RealTensor& a, const RealTensor& b);

RealTensor operator+(const RealTensor& a, const RealTensor& b);
RealTensor operator-(const RealTensor& a, const RealTensor& b);
RealTensor operator*(double s, const RealTensor& a);

/// Contraction over two slots. Slots of opposite variance are summed
/// directly; like-variance slots need the metric (g_inv for two covariant
/// slots, g for two contravariant ones). The result keeps the remaining
/// slots in order.
RealTensor contract(const RealTensor& t, int slot_a, int slot_b,
                    const MetricValue* metric = nullptr);

/// Raise a covariant slot / lower a contravariant slot in place of itself.
RealTensor raise(const RealTensor& t, int slot, const MetricValue& metric);
RealTensor lower(const RealTensor& t, int slot, const MetricValue& metric);

/// Full contraction <a, b> with every slot paired through the metric
/// (each tensor's slot variance decides whether g or g_inv is used).
double inner_product(const RealTensor& a, const RealTensor& b,
                     const MetricValue& metric);
inline double norm_squared(const RealTensor& a, const MetricValue& metric) {
  return inner_product(a, a, metric);
}

/// Outer product a (x) b.
RealTensor outer(const RealTensor& a, const RealTensor& b);

/// Tensor with slots permuted: result(idx) = t(idx[perm[0]], ...) where
/// result slot s takes t's slot perm[s].
RealTensor permute(const RealTensor& t, std::span<const int> perm);

/// Residual ratio max|residual| / (1 + scale), the relative measure used
/// for every identity check.
inline double relative_residual(double max_abs_residual, double scale) {
  return max_abs_residual / (1.0 + std::abs(scale));
}

struct CottonSymmetryReport {
  double antisymmetry;  // max |C_ijk + C_jik|
  double cyclic;        // max |C_ijk + C_jki + C_kij|
  double trace;         // max over slot pairs of |tr_g|
  double scale;         // max |C_ijk|

  double max_residual() const { return std::max({antisymmetry, cyclic, trace}); }
  double relative() const { return relative_residual(max_residual(), scale); }
};

/// Checks the algebraic symmetries shared by Cotton-type tensors on a
/// fully covariant rank-3 tensor.
CottonSymmetryReport check_cotton_symmetries(const RealTensor& c,
                                             const MetricValue& metric);

/// Covariant rank-3 tensor T built from a symmetric Ricci-like S_ij, its
/// trace scalar, the metric and a gradient-like covector v_i:
///   T_ijk = (S_jl v^l g_ik - S_il v^l g_jk) / (n-2)
///         + R (v_i g_jk - v_j g_ik) / (n-2)
///         + (n-1) (v_j S_ik - v_i S_jk) / (n-2).
RealTensor t_tensor(const RealTensor& ricci, double scalar,
                    const RealTensor& grad, const MetricValue& metric);

}  // namespace etlab
