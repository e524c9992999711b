#pragma once

#include <cstdint>
#include <utility>

#include "diffstru/common.hpp"

namespace diffstru {

// Partially observed directed graph. mask(i,j)=1 marks pairs whose link
// status was actually collected; following Def.-1 semantics, a known link is
// always an observed pair, while zeros of the adjacency carry no negative
// evidence unless the mask says so.
struct ObservedNetwork {
  int n_nodes = 0;
  IntMatrix adjacency;  // N x N binary, zero diagonal
  IntMatrix mask;       // Omega

  // Observed-links-only view: mask equals the adjacency.
  static ObservedNetwork from_adjacency(IntMatrix adj);
  static ObservedNetwork from_adjacency(IntMatrix adj, IntMatrix mask);
  void validate() const;
};

// Infection records. A cell is either an observed infection with a hit time
// or unobserved; there is no numeric sentinel for "uninfected".
struct CascadeSet {
  int n_nodes = 0;
  int n_cascades = 0;
  Matrix times;         // meaningful only where observed(i,j)=1
  IntMatrix observed;   // Pi mask
  double window = 0.0;  // T_obs
  // When false, entries are raw model draws: the source-anchoring shift was
  // skipped and times are not constrained to [0, T_obs].
  bool source_anchored = true;

  static CascadeSet empty(int n_nodes, int n_cascades, double window);
  const IntMatrix& pi() const { return observed; }
  void set(int node, int cascade, double time);
  void clear(int node, int cascade);
  bool is_observed(int node, int cascade) const {
    return observed(node, cascade) != 0;
  }
  long long n_observed() const { return observed.cast<long long>().sum(); }
  void validate() const;
};

struct LatentState {
  Matrix X;       // D x N
  Matrix Y;       // D x M
  Matrix U;       // D x N
  Matrix R;       // N x N
  Matrix Lambda;  // N x N, strictly positive
  IntMatrix Xi;   // N x N binary
  double mu_xi = 0.5;

  void validate(const ObservedNetwork& network) const;
};

struct PriorConfig {
  // Inverse covariances (precisions) of the latent-row priors.
  Matrix inv_W_X;  // N x N
  Matrix inv_W_U;  // N x N
  Matrix inv_W_Y;  // M x M
  double sigma2_C = 1.0;
  double sigma2_R = 1.0;
  double alpha1 = 0.2;
  double alpha2 = 0.3;
  int D = 8;

  static PriorConfig identity(int n_nodes, int n_cascades, int D = 8);
  void validate(int n_nodes, int n_cascades) const;
};

struct SamplerConfig {
  int n_iter = 1000;
  int burn_in = 900;
  int thinning = 1;
  std::uint64_t rng_seed = 0;
  // The printed update rule fixes the conditional variance of R at 1 even
  // though the augmented model implies precision Xi*Lambda + 1/sigma2_R.
  // Default follows the printed rule; the flag switches to the derived one.
  bool derived_r_precision = false;

  void validate() const;
  int retained() const { return (n_iter - burn_in) / thinning; }
};

// (Omega, Pi) observation indicators. Throws DataError on shape mismatch.
std::pair<IntMatrix, IntMatrix> build_masks(const ObservedNetwork& network,
                                            const CascadeSet& cascades);

// Overflow-safe logistic sigmoid.
double logistic(double t);

struct GroundTruth {
  ObservedNetwork network;  // fully observed (mask = adjacency)
  CascadeSet cascades;
  LatentState latent;
};

// Samples one draw of the full generative model. pi_density is the Bernoulli
// rate for the diffusion observer mask Pi (1.0 = every cell carries a value).
GroundTruth generate_from_model(const PriorConfig& prior, int n_nodes,
                                int n_cascades, double window,
                                std::uint64_t seed, double pi_density = 1.0);

}  // namespace diffstru
