#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etlab/random.hpp"
#include "etlab/tensor.hpp"

namespace etlab {

/// Random SPD metric A A^T + n I with A entries uniform in [-1, 1].
MetricValue random_spd_metric(int dim, Rng& rng);
/// Random symmetric covariant rank-2 tensor, entries uniform in [-1, 1].
RealTensor random_symmetric(int dim, Rng& rng);
RealTensor random_covector(int dim, Rng& rng);
/// Random covariant rank-3 tensor without any imposed symmetry.
RealTensor random_rank3(int dim, Rng& rng);

/// sum_{k,j} 2 H^{kj} C_jki for every i, with H covariant symmetric.
RealTensor hessian_cotton_contraction(const RealTensor& hessian,
                                      const RealTensor& cotton,
                                      const MetricValue& metric);

/// Left side S^{ji} v^k C_kji and right side -((n-2) f / (2(n-1))) |C|^2 of
/// the contraction identity valid when f C = T and C is trace-free.
struct ContractionSides {
  double lhs;
  double rhs;
};
ContractionSides cotton_contraction_sides(const RealTensor& ricci,
                                          const RealTensor& grad,
                                          const RealTensor& cotton, double f,
                                          const MetricValue& metric);

struct AlgebraOptions {
  std::vector<int> dims{4, 5, 6};
  double hessian_tolerance = 1e-12;
  double contraction_tolerance = 1e-9;
  unsigned threads = 0;
};

struct AlgebraFailure {
  std::uint64_t seed;
  int trial;
  int dim;
  std::string identity;
  double relative_residual;
};

struct AlgebraReport {
  int trials = 0;
  double max_hessian_residual = 0.0;      // relative
  double mean_hessian_residual = 0.0;
  double max_contraction_residual = 0.0;  // relative
  double mean_contraction_residual = 0.0;
  std::vector<AlgebraFailure> failures;

  bool passed() const { return failures.empty(); }
};

/// Draws `trials` random configurations (SPD g, symmetric S with R = tr S,
/// covector v, potential f != 0), sets C = T(S, R, v) / f and checks the
/// Hessian-Cotton cancellation and the |C|^2 contraction identity.
AlgebraReport random_algebra_identity_suite(std::uint64_t seed, int trials,
                                            const AlgebraOptions& options = {});

}  // namespace etlab
