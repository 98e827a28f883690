#include "etlab/algebra.hpp"

#include "etlab/parallel.hpp"

namespace etlab {

MetricValue random_spd_metric(int dim, Rng& rng) {
  std::vector<double> a(dim * dim);
  for (auto& x : a) x = uniform(rng, -1.0, 1.0);
  RealTensor g = RealTensor::covariant(dim, 2, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = (i == j) ? dim : 0.0;
      for (int k = 0; k < dim; ++k) s += a[i * dim + k] * a[j * dim + k];
      g(i, j) = s;
    }
  return MetricValue::from_matrix(g);
}

RealTensor random_symmetric(int dim, Rng& rng) {
  RealTensor s = RealTensor::covariant(dim, 2, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) s(i, j) = s(j, i) = uniform(rng, -1.0, 1.0);
  return s;
}

RealTensor random_covector(int dim, Rng& rng) {
  RealTensor v = RealTensor::covariant(dim, 1, 0.0);
  for (auto& x : v.data()) x = uniform(rng, -1.0, 1.0);
  return v;
}

RealTensor random_rank3(int dim, Rng& rng) {
  RealTensor t = RealTensor::covariant(dim, 3, 0.0);
  for (auto& x : t.data()) x = uniform(rng, -1.0, 1.0);
  return t;
}

RealTensor hessian_cotton_contraction(const RealTensor& hessian,
                                      const RealTensor& cotton,
                                      const MetricValue& metric) {
  const int n = cotton.dim();
  const RealTensor h_up = raise(raise(hessian, 0, metric), 1, metric);
  RealTensor out = RealTensor::covariant(n, 1, 0.0);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) sum += 2.0 * h_up(k, j) * cotton(j, k, i);
    out(i) = sum;
  }
  return out;
}

ContractionSides cotton_contraction_sides(const RealTensor& ricci,
                                          const RealTensor& grad,
                                          const RealTensor& cotton, double f,
                                          const MetricValue& metric) {
  const int n = cotton.dim();
  const RealTensor& gi = metric.g_inv;
  double lhs = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double s_up = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s_up += gi(j, a) * gi(i, b) * ricci(a, b);
      for (int k = 0; k < n; ++k) {
        double v_up = 0.0;
        for (int c = 0; c < n; ++c) v_up += gi(k, c) * grad(c);
        lhs += s_up * v_up * cotton(k, j, i);
      }
    }
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              norm2 += cotton(i, j, k) * gi(i, a) * gi(j, b) * gi(k, c) * cotton(a, b, c);
  return {lhs, -((n - 2.0) * f / (2.0 * (n - 1.0))) * norm2};
}

AlgebraReport random_algebra_identity_suite(std::uint64_t seed, int trials,
                                            const AlgebraOptions& options) {
  if (trials < 1) throw ConfigError("algebra suite needs at least one trial");
  if (options.dims.empty()) throw ConfigError("algebra suite needs a dimension");
  struct Outcome {
    int dim;
    double hessian;
    double contraction;
  };
  std::vector<Outcome> outcomes(trials);
  parallel_for(trials, options.threads, [&](std::size_t t) {
    Rng rng = make_rng(seed, t);
    const int n = options.dims[std::uniform_int_distribution<std::size_t>(
        0, options.dims.size() - 1)(rng)];
    const MetricValue metric = random_spd_metric(n, rng);
    const RealTensor s = random_symmetric(n, rng);
    const double r = contract(s, 0, 1, &metric)[0];
    const RealTensor v = random_covector(n, rng);
    const double f = uniform(rng, 0.5, 2.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    const RealTensor h = random_symmetric(n, rng);

    const RealTensor c = (1.0 / f) * t_tensor(s, r, v, metric);

    const RealTensor hc = hessian_cotton_contraction(h, c, metric);
    double hc_scale = 0.0;
    {
      const RealTensor h_up = raise(raise(h, 0, metric), 1, metric);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j)
            hc_scale = std::max(hc_scale, std::abs(2.0 * h_up(k, j) * c(j, k, i)));
    }
    const auto sides = cotton_contraction_sides(s, v, c, f, metric);
    outcomes[t] = {n, relative_residual(max_abs(hc), hc_scale),
                   relative_residual(std::abs(sides.lhs - sides.rhs),
                                     std::max(std::abs(sides.lhs), std::abs(sides.rhs)))};
  });

  AlgebraReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const auto& o = outcomes[t];
    report.max_hessian_residual = std::max(report.max_hessian_residual, o.hessian);
    report.max_contraction_residual = std::max(report.max_contraction_residual, o.contraction);
    report.mean_hessian_residual += o.hessian / trials;
    report.mean_contraction_residual += o.contraction / trials;
    if (o.hessian > options.hessian_tolerance) {
      report.failures.push_back({seed, t, o.dim, "hessian_cotton_cancellation", o.hessian});
    }
    if (o.contraction > options.contraction_tolerance) {
      report.failures.push_back({seed, t, o.dim, "cotton_norm_contraction", o.contraction});
    }
  }
  return report;
}

}  // namespace etlab
