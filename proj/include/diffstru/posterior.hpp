#pragma once

#include <cstdint>
#include <vector>

#include "diffstru/types.hpp"

namespace diffstru {

// Conditional Gaussian for one D x K latent matrix. When the row prior's
// precision is diagonal the posterior decouples into K independent D x D
// blocks (one per column of the latent matrix); a coupling prior (graph
// Laplacian) forces the dense D*K representation. Dense vectors are ordered
// column-major: entry (d, k) sits at k*D + d.
struct MatrixGaussian {
  Matrix mean;  // D x K
  bool coupled = false;
  std::vector<Eigen::LLT<Matrix>> block_prec;  // K entries when decoupled
  Eigen::LLT<Matrix> dense_prec;               // when coupled

  int D() const { return static_cast<int>(mean.rows()); }
  int K() const { return static_cast<int>(mean.cols()); }

  // mean + Prec^{-1/2} z, one substream per column (block) in the decoupled
  // case, a single substream otherwise.
  Matrix sample(std::uint64_t seed, std::uint64_t tag) const;

  // Full D*K x D*K covariance; test/diagnostic scale only.
  Matrix covariance() const;
  Vector vec_mean() const;
};

// Posterior of Y given X: per-cascade blocks sigma_C^{-2} sum_i Pi_ij x_i
// x_i^T plus the row prior.
MatrixGaussian y_posterior(const Matrix& X, const Matrix& C,
                           const IntMatrix& Pi, const PriorConfig& prior);

// Posterior of U given X and R: every node shares the dense R likelihood
// block sigma_R^{-2} X X^T.
MatrixGaussian u_posterior(const Matrix& X, const Matrix& R,
                           const PriorConfig& prior);

// Posterior of X given Y, U, C, R: per-node blocks combining the masked C
// likelihood, the dense R likelihood and the row prior.
MatrixGaussian x_posterior(const Matrix& Y, const Matrix& U, const Matrix& C,
                           const IntMatrix& Pi, const Matrix& R,
                           const PriorConfig& prior);

bool is_diagonal(const Matrix& m, double tol = 0.0);

}  // namespace diffstru
