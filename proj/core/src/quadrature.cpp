#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "etlab/catalog.hpp"

namespace etlab {

Example1Profile example1_profile(int n, double r) {
  if (n < 3) throw ConfigError("example1_profile needs n >= 3");
  if (!(r > 1.0)) throw DomainError("example1_profile needs r > 1, got " + std::to_string(r));
  // t(r) = int_1^r du / sqrt(1 - u^(2-n)); with u = 1 + s^2 the endpoint
  // singularity becomes a bounded integrand.
  auto integrand = [n](double s) {
    if (s == 0.0) return 2.0 / std::sqrt(n - 2.0);
    const double q = -std::expm1((2.0 - n) * std::log1p(s * s));
    return 2.0 * s / std::sqrt(q);
  };
  const double upper = std::sqrt(r - 1.0);
  const double t = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 15, 1e-15);
  const double f_prime = std::sqrt(-std::expm1((2.0 - n) * std::log(r)));
  return {t, r, f_prime};
}

}  // namespace etlab
