#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "etlab/errors.hpp"

namespace etlab {

/// Enumeration of the multi-indices alpha with |alpha| <= order in `num_vars`
/// variables, in graded-lexicographic order. Index positions are stable under
/// a change of order: the monomials of degree <= k always form a prefix.
///
/// Bases are interned; `get` returns a reference that lives for the whole
/// program, so jets can hold a plain pointer.
class MonomialBasis {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  static const MonomialBasis& get(int num_vars, int order);

  int num_vars() const noexcept { return num_vars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return degree_.size(); }

  /// Number of monomials of degree <= `degree`.
  std::size_t prefix_size(int degree) const { return prefix_[degree]; }

  std::span<const std::uint8_t> exponents(std::size_t index) const {
    return {exponents_.data() + index * num_vars_,
            static_cast<std::size_t>(num_vars_)};
  }
  int degree(std::size_t index) const { return degree_[index]; }
  /// alpha! for the monomial at `index`.
  double factorial(std::size_t index) const { return factorial_[index]; }

  /// Position of alpha; throws if |alpha| > order or the length is wrong.
  std::size_t index_of(std::span<const int> alpha) const;

  /// All (lhs, rhs, out) with deg(lhs) + deg(rhs) <= order.
  const std::vector<Product>& products() const noexcept { return products_; }

  /// For a monomial alpha of degree <= order - 1 at `index`, the position of
  /// alpha + e_var in this basis.
  std::uint32_t raised(int var, std::size_t index) const {
    return raised_[static_cast<std::size_t>(var) * prefix_size(order_ - 1) +
                   index];
  }

 private:
  MonomialBasis(int num_vars, int order);

  std::uint64_t key(std::span<const std::uint8_t> alpha) const;

  int num_vars_;
  int order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<std::size_t> prefix_;
  std::vector<Product> products_;
  std::vector<std::uint32_t> raised_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> lookup_;
};

/// Truncated multivariate Taylor expansion of a scalar at a point.
///
/// Coefficient alpha stores d^alpha(u)/alpha!. All arithmetic is exact up to
/// roundoff: the product is the truncated Cauchy convolution, and elementary
/// functions are composed through their univariate Taylor series.
class Jet {
 public:
  /// Zero jet.
  Jet(int num_vars, int order);

  static Jet constant(int num_vars, int order, double value);
  /// The coordinate function x_var expanded at `point_value`.
  static Jet variable(int num_vars, int order, int var, double point_value);

  int num_vars() const noexcept { return basis_->num_vars(); }
  int order() const noexcept { return basis_->order(); }
  const MonomialBasis& basis() const noexcept { return *basis_; }

  double value() const noexcept { return coeffs_[0]; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  std::span<double> coefficients() noexcept { return coeffs_; }

  /// Taylor coefficient at alpha (zero-padded to order).
  double coefficient(std::span<const int> alpha) const;
  double coefficient(std::initializer_list<int> alpha) const {
    return coefficient(std::span<const int>(alpha.begin(), alpha.size()));
  }

  /// The raw partial derivative d^alpha at the expansion point.
  double partial(std::span<const int> alpha) const;
  double partial(std::initializer_list<int> alpha) const {
    return partial(std::span<const int>(alpha.begin(), alpha.size()));
  }

  /// d/dx_var as a jet of order - 1.
  Jet derivative(int var) const;
  Jet truncated(int order) const;

  double max_abs() const noexcept;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(double s) noexcept;
  Jet& operator+=(double s) noexcept {
    coeffs_[0] += s;
    return *this;
  }
  /// this += a * b without a temporary.
  void add_product(const Jet& a, const Jet& b);
  void add_scaled(const Jet& a, double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

 private:
  explicit Jet(const MonomialBasis* basis);
  void check_compatible(const Jet& other, const char* op) const;

  const MonomialBasis* basis_;
  std::vector<double> coeffs_;

  friend Jet compose(const Jet& inner, std::span<const double> outer);
};

/// f(inner) where outer[m] = f^(m)(inner.value()) / m!, m = 0..order.
Jet compose(const Jet& inner, std::span<const double> outer);

Jet recip(const Jet& a);
Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, int exponent);

}  // namespace etlab
