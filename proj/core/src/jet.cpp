#include "etlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "etlab/errors.hpp"

namespace etlab {
namespace {

constexpr int kMaxVars = 8;

void enumerate_degree(int num_vars, int degree, int var,
                      std::vector<std::uint8_t>& current,
                      std::vector<std::uint8_t>& out) {
  if (var == num_vars - 1) {
    current[var] = static_cast<std::uint8_t>(degree);
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(num_vars, degree - e, var + 1, current, out);
  }
}

struct Registry {
  std::mutex mutex;
  std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> bases;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

MonomialBasis::MonomialBasis(int num_vars, int order)
    : num_vars_(num_vars), order_(order) {
  std::vector<std::uint8_t> current(num_vars, 0);
  prefix_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(num_vars, d, 0, current, exponents_);
    prefix_[d] = exponents_.size() / num_vars;
  }
  const std::size_t count = prefix_[order];
  degree_.resize(count);
  factorial_.resize(count);
  lookup_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto alpha = exponents(i);
    int d = 0;
    double fact = 1.0;
    for (auto e : alpha) {
      d += e;
      for (int k = 2; k <= e; ++k) fact *= k;
    }
    degree_[i] = d;
    factorial_[i] = fact;
    lookup_.emplace_back(key(alpha), static_cast<std::uint32_t>(i));
  }
  std::sort(lookup_.begin(), lookup_.end());

  std::vector<std::uint8_t> sum(num_vars);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < prefix_[order - degree_[a]]; ++b) {
      auto ea = exponents(a);
      auto eb = exponents(b);
      for (int v = 0; v < num_vars; ++v) sum[v] = ea[v] + eb[v];
      const auto k = key(sum);
      auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                                 std::make_pair(k, std::uint32_t{0}));
      products_.push_back({static_cast<std::uint32_t>(a),
                           static_cast<std::uint32_t>(b), it->second});
    }
  }

  if (order > 0) {
    const std::size_t lower = prefix_[order - 1];
    raised_.resize(static_cast<std::size_t>(num_vars) * lower);
    for (int v = 0; v < num_vars; ++v) {
      for (std::size_t i = 0; i < lower; ++i) {
        auto alpha = exponents(i);
        std::copy(alpha.begin(), alpha.end(), sum.begin());
        sum[v] += 1;
        const auto k = key(sum);
        auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                                   std::make_pair(k, std::uint32_t{0}));
        raised_[v * lower + i] = it->second;
      }
    }
  }
}

std::uint64_t MonomialBasis::key(std::span<const std::uint8_t> alpha) const {
  std::uint64_t k = 0;
  for (auto e : alpha) k = (k << 8) | e;
  return k;
}

const MonomialBasis& MonomialBasis::get(int num_vars, int order) {
  if (num_vars < 1 || num_vars > kMaxVars) {
    throw ShapeMismatch("jet variable count must be in [1, " +
                        std::to_string(kMaxVars) + "], got " +
                        std::to_string(num_vars));
  }
  if (order < 0) throw ShapeMismatch("jet order must be non-negative");
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  auto& slot = reg.bases[{num_vars, order}];
  if (!slot) slot.reset(new MonomialBasis(num_vars, order));
  return *slot;
}

std::size_t MonomialBasis::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != num_vars_) {
    throw ShapeMismatch("multi-index has length " +
                        std::to_string(alpha.size()) + ", expected " +
                        std::to_string(num_vars_));
  }
  int d = 0;
  std::vector<std::uint8_t> e(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0) throw ShapeMismatch("negative multi-index entry");
    d += alpha[i];
    e[i] = static_cast<std::uint8_t>(alpha[i]);
  }
  if (d > order_) {
    throw OrderExhausted("multi-index of degree " + std::to_string(d) +
                             " exceeds jet order " + std::to_string(order_),
                         d);
  }
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                             std::make_pair(key(e), std::uint32_t{0}));
  return it->second;
}

Jet::Jet(const MonomialBasis* basis)
    : basis_(basis), coeffs_(basis->size(), 0.0) {}

Jet::Jet(int num_vars, int order) : Jet(&MonomialBasis::get(num_vars, order)) {}

Jet Jet::constant(int num_vars, int order, double value) {
  Jet j(num_vars, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int num_vars, int order, int var, double point_value) {
  if (var < 0 || var >= num_vars) throw ShapeMismatch("variable out of range");
  Jet j(num_vars, order);
  j.coeffs_[0] = point_value;
  if (order > 0) j.coeffs_[1 + var] = 1.0;
  return j;
}

double Jet::coefficient(std::span<const int> alpha) const {
  return coeffs_[basis_->index_of(alpha)];
}

double Jet::partial(std::span<const int> alpha) const {
  const auto i = basis_->index_of(alpha);
  return coeffs_[i] * basis_->factorial(i);
}

Jet Jet::derivative(int var) const {
  if (var < 0 || var >= num_vars()) {
    throw ShapeMismatch("derivative variable out of range");
  }
  if (order() == 0) {
    throw OrderExhausted("cannot differentiate a jet of order 0", 1);
  }
  Jet out(num_vars(), order() - 1);
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    const auto src = basis_->raised(var, i);
    const int alpha_var = basis_->exponents(src)[var];
    out.coeffs_[i] = alpha_var * coeffs_[src];
  }
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) {
    throw OrderExhausted("cannot extend a jet of order " +
                             std::to_string(order()) + " to order " +
                             std::to_string(new_order),
                         new_order);
  }
  if (new_order == order()) return *this;
  Jet out(num_vars(), new_order);
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

double Jet::max_abs() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

void Jet::check_compatible(const Jet& other, const char* op) const {
  if (basis_ != other.basis_) {
    throw ShapeMismatch(std::string("jet ") + op + ": shapes (" +
                        std::to_string(num_vars()) + " vars, order " +
                        std::to_string(order()) + ") and (" +
                        std::to_string(other.num_vars()) + " vars, order " +
                        std::to_string(other.order()) + ") differ");
  }
}

Jet& Jet::operator+=(const Jet& other) {
  check_compatible(other, "add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_compatible(other, "subtract");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) noexcept {
  for (double& c : coeffs_) c *= s;
  return *this;
}

void Jet::add_scaled(const Jet& a, double s) {
  check_compatible(a, "add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * a.coeffs_[i];
}

void Jet::add_product(const Jet& a, const Jet& b) {
  check_compatible(a, "multiply");
  check_compatible(b, "multiply");
  const double* pa = a.coeffs_.data();
  const double* pb = b.coeffs_.data();
  double* out = coeffs_.data();
  const auto& products = basis_->products();
  std::size_t p = 0;
  while (p < products.size()) {
    const auto lhs = products[p].lhs;
    const double x = pa[lhs];
    if (x == 0.0) {
      while (p < products.size() && products[p].lhs == lhs) ++p;
      continue;
    }
    for (; p < products.size() && products[p].lhs == lhs; ++p) {
      out[products[p].out] += x * pb[products[p].rhs];
    }
  }
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.basis_);
  out.add_product(a, b);
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet compose(const Jet& inner, std::span<const double> outer) {
  const int k = inner.order();
  if (static_cast<int>(outer.size()) < k + 1) {
    throw ShapeMismatch("outer series shorter than jet order");
  }
  Jet nilpotent = inner;
  nilpotent.coeffs_[0] = 0.0;
  Jet result(inner.basis_);
  result.coeffs_[0] = outer[k];
  for (int m = k - 1; m >= 0; --m) {
    result = result * nilpotent;
    result.coeffs_[0] += outer[m];
  }
  return result;
}

Jet recip(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) throw DomainError("reciprocal of a jet with zero value");
  std::vector<double> c(a.order() + 1);
  double term = 1.0 / a0;
  for (auto& x : c) {
    x = term;
    term *= -1.0 / a0;
  }
  return compose(a, c);
}

Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) {
    throw DomainError("sqrt of a jet with non-positive value " +
                      std::to_string(a0));
  }
  // binom(1/2, m) * a0^(1/2 - m)
  std::vector<double> c(a.order() + 1);
  double binom = 1.0;
  double power = std::sqrt(a0);
  for (int m = 0; m <= a.order(); ++m) {
    c[m] = binom * power;
    binom *= (0.5 - m) / (m + 1);
    power /= a0;
  }
  return compose(a, c);
}

Jet exp(const Jet& a) {
  std::vector<double> c(a.order() + 1);
  double term = std::exp(a.value());
  for (int m = 0; m <= a.order(); ++m) {
    c[m] = term;
    term /= (m + 1);
  }
  return compose(a, c);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) {
    throw DomainError("log of a jet with non-positive value " +
                      std::to_string(a0));
  }
  std::vector<double> c(a.order() + 1);
  c[0] = std::log(a0);
  double power = 1.0;
  for (int m = 1; m <= a.order(); ++m) {
    power /= a0;
    c[m] = ((m % 2 == 1) ? 1.0 : -1.0) * power / m;
  }
  return compose(a, c);
}

namespace {

// Taylor coefficients of sin (phase 0) or cos (phase 1) about x0.
std::vector<double> trig_series(double x0, int order, int phase) {
  const double s = std::sin(x0);
  const double co = std::cos(x0);
  const double cycle[4] = {s, co, -s, -co};
  std::vector<double> c(order + 1);
  double fact = 1.0;
  for (int m = 0; m <= order; ++m) {
    if (m > 0) fact *= m;
    c[m] = cycle[(m + phase) % 4] / fact;
  }
  return c;
}

}  // namespace

Jet sin(const Jet& a) { return compose(a, trig_series(a.value(), a.order(), 0)); }

Jet cos(const Jet& a) { return compose(a, trig_series(a.value(), a.order(), 1)); }

Jet pow(const Jet& a, int exponent) {
  if (exponent < 0) return recip(pow(a, -exponent));
  Jet result = Jet::constant(a.num_vars(), a.order(), 1.0);
  Jet base = a;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace etlab
