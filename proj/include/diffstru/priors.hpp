#pragma once

#include "diffstru/types.hpp"

namespace diffstru {

// Symmetric non-negative similarity with zero diagonal.
struct SimilarityMatrix {
  int dim = 0;
  Matrix values;

  void validate() const;
};

// Common-neighbor counts over the observed graph, with neighborhoods taken
// as the union of in- and out-neighbors so the result is symmetric.
SimilarityMatrix node_similarity(const ObservedNetwork& network);

// Shared-node counts between pairs of cascades.
SimilarityMatrix cascade_similarity(const CascadeSet& cascades);

// Graph-Laplacian inverse covariance: zeta - Theta with zeta_ii = sum_j
// Theta_ji, plus ridge * I on the diagonal. ridge = 0 keeps the singular
// Laplacian (row sums zero); a positive ridge makes it positive definite.
Matrix laplacian_prior(const SimilarityMatrix& theta, double ridge);

constexpr double kDefaultRidge = 1e-2;

}  // namespace diffstru
