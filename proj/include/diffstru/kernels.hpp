#pragma once

#include <cstdint>

#include "diffstru/types.hpp"

namespace diffstru::kernels {

// Per-cell Gibbs field updates. Each row of the field draws from its own RNG
// substream keyed by (seed, tag, row), so the OpenMP variants reproduce the
// serial ones bit for bit at any thread count. The serial versions are the
// reference implementations kept for parity tests and the benchmark.

// R_ij ~ N(mu, v); printed rule: mu = (Xi (G - 0.5) s2R + XtU) / (Xi L s2R + 1),
// v = 1. With derived_precision: prec = Xi L + 1/s2R, mu = (Xi (G - 0.5) +
// XtU / s2R) / prec, v = 1/prec.
void sample_r_serial(Matrix& R, const IntMatrix& Xi, const IntMatrix& G,
                     const Matrix& XtU, const Matrix& Lambda, double sigma2_R,
                     bool derived_precision, std::uint64_t seed,
                     std::uint64_t tag);
void sample_r_omp(Matrix& R, const IntMatrix& Xi, const IntMatrix& G,
                  const Matrix& XtU, const Matrix& Lambda, double sigma2_R,
                  bool derived_precision, std::uint64_t seed,
                  std::uint64_t tag);

// Xi_ij forced to 1 on observed-link cells, elsewhere Bernoulli(xi) with
// xi = mu (1 - f(R)) / (1 - mu f(R)); f(R) clamped away from {0,1}.
void sample_xi_serial(IntMatrix& Xi, const IntMatrix& G, const Matrix& R,
                      double mu_xi, std::uint64_t seed, std::uint64_t tag);
void sample_xi_omp(IntMatrix& Xi, const IntMatrix& G, const Matrix& R,
                   double mu_xi, std::uint64_t seed, std::uint64_t tag);

// Lambda_ij ~ PG(1, R_ij).
void sample_lambda_serial(Matrix& Lambda, const Matrix& R, std::uint64_t seed,
                          std::uint64_t tag);
void sample_lambda_omp(Matrix& Lambda, const Matrix& R, std::uint64_t seed,
                       std::uint64_t tag);

}  // namespace diffstru::kernels
