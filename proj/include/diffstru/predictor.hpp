#pragma once

#include "diffstru/sampler.hpp"
#include "diffstru/types.hpp"

namespace diffstru {

struct PredictionResult {
  IntMatrix G_hat;     // N x N binary
  Matrix G_score;      // N x N, sigma(X^T U)
  Matrix C_hat_times;  // N x M, meaningful where C_hat_infected = 1
  IntMatrix C_hat_infected;
  Matrix P;  // N x M infection probabilities
  Matrix A;  // N x N infection transfer
};

// Recovered links: observed cells pass through; elsewhere the averaged-Xi
// veto (Xi_bar < 0.5) or a score at or below delta_G forces zero.
std::pair<IntMatrix, Matrix> predict_links(const PosteriorEstimate& est,
                                           const ObservedNetwork& network,
                                           double delta_G);

// A[i][j] = #cascades with both observed and t_i < t_j over #cascades with
// either observed; 0/0 is 0. Diagonal zero.
Matrix infection_transfer(const CascadeSet& cascades);

// P[i][j] = sum_k Pi[k][j] A[k][i]: transfer mass from cascade j's observed
// infections into node i. With row_normalized_alternative the transposed
// reading A^T Pi with row-normalized A is used instead.
Matrix infection_probability(const CascadeSet& cascades, const Matrix& A,
                             bool row_normalized_alternative = false);

// Recovered cascade cells: pass through observed; otherwise z = x_i^T y_j is
// accepted only when P > delta_C and z falls inside [0, T_obs].
std::pair<IntMatrix, Matrix> predict_cascades(const PosteriorEstimate& est,
                                              const CascadeSet& cascades,
                                              const Matrix& P, double delta_C);

// delta_C default per the hyper-parameter recipe: mean of all P entries.
double default_delta_C(const Matrix& P);

constexpr double kDefaultDeltaG = 0.5;

PredictionResult predict(const PosteriorEstimate& est,
                         const ObservedNetwork& network,
                         const CascadeSet& cascades, double delta_G,
                         bool row_normalized_alternative = false);

}  // namespace diffstru
