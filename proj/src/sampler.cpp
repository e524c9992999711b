#include "diffstru/sampler.hpp"

#include <cmath>

#include "diffstru/kernels.hpp"
#include "diffstru/pg.hpp"
#include "diffstru/posterior.hpp"
#include "diffstru/rng.hpp"

namespace diffstru {

namespace {

Matrix standard_normal(int rows, int cols, std::uint64_t seed,
                       std::uint64_t tag) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    Rng rng = substream(seed, tag, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

double beta_draw(double a, double b, Rng& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  if (!(x + y > 0.0)) throw NumericError("degenerate Beta draw");
  return std::min(std::max(x / (x + y), 1e-12), 1.0 - 1e-12);
}

}  // namespace

LatentState initial_state(const ObservedNetwork& network,
                          const CascadeSet& cascades, const PriorConfig& prior,
                          std::uint64_t seed) {
  const int N = network.n_nodes;
  const int M = cascades.n_cascades;
  const int D = prior.D;
  LatentState s;
  s.X = standard_normal(D, N, seed, stream::kInitX);
  s.Y = standard_normal(D, M, seed, stream::kInitY);
  s.U = standard_normal(D, N, seed, stream::kInitU);
  s.R = standard_normal(N, N, seed, stream::kInitR);
  s.Lambda = Matrix(N, N);
  kernels::sample_lambda_omp(s.Lambda, Matrix::Zero(N, N), seed,
                             stream::kInitLambda);
  Rng rng = substream(seed, stream::kInitMuXi);
  s.mu_xi = beta_draw(prior.alpha1, prior.alpha2, rng);
  s.Xi = network.adjacency;  // ones exactly on observed links
  return s;
}

PosteriorEstimate run_gibbs(const ObservedNetwork& network,
                            const CascadeSet& cascades,
                            const PriorConfig& prior, const SamplerConfig& cfg,
                            const GibbsOptions& opts) {
  const auto [omega, pi] = build_masks(network, cascades);
  (void)omega;
  cfg.validate();
  prior.validate(network.n_nodes, cascades.n_cascades);

  const int N = network.n_nodes;
  const int M = cascades.n_cascades;
  const int D = prior.D;
  const IntMatrix& G = network.adjacency;
  const Matrix& C = cascades.times;
  const std::uint64_t seed = cfg.rng_seed;

  LatentState state;
  Matrix sum_X = Matrix::Zero(D, N);
  Matrix sum_Y = Matrix::Zero(D, M);
  Matrix sum_U = Matrix::Zero(D, N);
  Matrix sum_Xi = Matrix::Zero(N, N);
  int n_retained = 0;
  std::vector<TraceRow> trace;
  int start_iter = 0;
  if (opts.resume_from != nullptr) {
    const Checkpoint& ck = *opts.resume_from;
    state = ck.state;
    sum_X = ck.sum_X;
    sum_Y = ck.sum_Y;
    sum_U = ck.sum_U;
    sum_Xi = ck.sum_Xi;
    n_retained = ck.n_retained;
    trace = ck.trace;
    start_iter = ck.completed_iterations;
  } else {
    state = initial_state(network, cascades, prior, seed);
  }

  for (int t = start_iter + 1; t <= cfg.n_iter; ++t) {
    const std::uint64_t iter_seed = mix_seed(seed, 0xA11CE, t);
    try {
      Matrix XtU = state.X.transpose() * state.U;
      kernels::sample_r_omp(state.R, state.Xi, G, XtU, state.Lambda,
                            prior.sigma2_R, cfg.derived_r_precision, iter_seed,
                            stream::kSampleR);
      kernels::sample_xi_omp(state.Xi, G, state.R, state.mu_xi, iter_seed,
                             stream::kSampleXi);
      state.X = x_posterior(state.Y, state.U, C, pi, state.R, prior)
                    .sample(iter_seed, stream::kSampleX);
      state.U = u_posterior(state.X, state.R, prior)
                    .sample(iter_seed, stream::kSampleU);
      state.Y = y_posterior(state.X, C, pi, prior)
                    .sample(iter_seed, stream::kSampleY);
      kernels::sample_lambda_omp(state.Lambda, state.R, iter_seed,
                                 stream::kSampleLambda);
      const long long sum_xi_count = state.Xi.cast<long long>().sum();
      const double beta_a = prior.alpha1 + static_cast<double>(sum_xi_count);
      const double beta_b = prior.alpha2 + static_cast<double>(N) * N -
                            static_cast<double>(sum_xi_count);
      Rng mu_rng = substream(iter_seed, stream::kSampleMuXi);
      state.mu_xi = beta_draw(beta_a, beta_b, mu_rng);

      const bool retained =
          t > cfg.burn_in && (t - cfg.burn_in) % cfg.thinning == 0;
      if (retained) {
        sum_X += state.X;
        sum_Y += state.Y;
        sum_U += state.U;
        sum_Xi += state.Xi.cast<double>();
        ++n_retained;
        TraceRow row;
        row.iteration = t;
        const Matrix resid = (C - state.X.transpose() * state.Y)
                                 .cwiseProduct(pi.cast<double>());
        row.resid_C = resid.squaredNorm();
        row.resid_R = (state.R - state.X.transpose() * state.U).squaredNorm();
        row.sum_xi = sum_xi_count;
        row.beta_a = beta_a;
        row.beta_b = beta_b;
        row.mu_xi = state.mu_xi;
        trace.push_back(row);
      }
      if (opts.on_iteration) opts.on_iteration(t, state);
      if (opts.checkpoint_every > 0 && opts.on_checkpoint &&
          t % opts.checkpoint_every == 0) {
        Checkpoint ck;
        ck.completed_iterations = t;
        ck.state = state;
        ck.sum_X = sum_X;
        ck.sum_Y = sum_Y;
        ck.sum_U = sum_U;
        ck.sum_Xi = sum_Xi;
        ck.n_retained = n_retained;
        ck.trace = trace;
        opts.on_checkpoint(ck);
      }
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(t) + ": " + e.what());
    }
  }

  if (n_retained != cfg.retained())
    throw NumericError("retained-draw bookkeeping mismatch");
  PosteriorEstimate est;
  est.n_retained = n_retained;
  est.X_bar = sum_X / n_retained;
  est.Y_bar = sum_Y / n_retained;
  est.U_bar = sum_U / n_retained;
  est.Xi_bar = sum_Xi / n_retained;
  est.trace = std::move(trace);
  return est;
}

}  // namespace diffstru
