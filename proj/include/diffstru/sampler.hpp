#pragma once

#include <functional>
#include <vector>

#include "diffstru/types.hpp"

namespace diffstru {

struct TraceRow {
  int iteration = 0;
  double resid_C = 0.0;   // masked sum of squared C residuals
  double resid_R = 0.0;   // sum of squared R residuals around X^T U
  long long sum_xi = 0;   // Beta posterior count
  double beta_a = 0.0;    // alpha1 + sum Xi
  double beta_b = 0.0;    // alpha2 + N^2 - sum Xi
  double mu_xi = 0.0;
};

struct PosteriorEstimate {
  Matrix X_bar;   // D x N
  Matrix Y_bar;   // D x M
  Matrix U_bar;   // D x N
  Matrix Xi_bar;  // N x N in [0,1]
  int n_retained = 0;
  std::vector<TraceRow> trace;  // one row per retained draw
};

// Mid-chain snapshot; everything needed to resume exactly, since all
// randomness is derived from (rng_seed, iteration).
struct Checkpoint {
  int completed_iterations = 0;
  LatentState state;
  Matrix sum_X, sum_Y, sum_U;
  Matrix sum_Xi;  // real-valued accumulation of retained binary draws
  int n_retained = 0;
  std::vector<TraceRow> trace;
};

struct GibbsOptions {
  // Called after each sweep (1-based iteration index).
  std::function<void(int, const LatentState&)> on_iteration;
  // Checkpoint callback, fired every checkpoint_every sweeps when set.
  int checkpoint_every = 0;
  std::function<void(const Checkpoint&)> on_checkpoint;
  // Resume point; when set the first resume_from->completed_iterations
  // sweeps are skipped and accumulators start from the snapshot.
  const Checkpoint* resume_from = nullptr;
};

// Alg.-2 sweep order: R, Xi, X, U, Y, Lambda, mu_xi. Deterministic given
// cfg.rng_seed at any thread count.
PosteriorEstimate run_gibbs(const ObservedNetwork& network,
                            const CascadeSet& cascades,
                            const PriorConfig& prior, const SamplerConfig& cfg,
                            const GibbsOptions& opts = {});

// Initial state of the chain: standard-normal continuous variables, Lambda
// from PG(1,0), mu_xi from its Beta prior, Xi from the observed adjacency.
LatentState initial_state(const ObservedNetwork& network,
                          const CascadeSet& cascades, const PriorConfig& prior,
                          std::uint64_t seed);

}  // namespace diffstru
