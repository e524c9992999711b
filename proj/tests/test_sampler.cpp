#include "diffstru/sampler.hpp"

#include <cmath>

#include "diffstru/rng.hpp"
#include "doctest.h"

using namespace diffstru;

namespace {

struct SmallProblem {
  ObservedNetwork network;
  CascadeSet cascades;
  PriorConfig prior;
};

SmallProblem make_problem(int n, int m, int d, std::uint64_t seed) {
  PriorConfig prior = PriorConfig::identity(n, m, d);
  GroundTruth gt = generate_from_model(prior, n, m, 10.0, seed);
  return {gt.network, gt.cascades, prior};
}

}  // namespace

TEST_CASE("retention arithmetic: exactly one retained draw") {
  SamplerConfig cfg;
  cfg.n_iter = 10;
  cfg.burn_in = 9;
  cfg.thinning = 1;
  cfg.rng_seed = 5;
  CHECK(cfg.retained() == 1);
  const auto prob = make_problem(5, 3, 2, 7);
  const PosteriorEstimate est =
      run_gibbs(prob.network, prob.cascades, prob.prior, cfg);
  CHECK(est.n_retained == 1);
  CHECK(est.trace.size() == 1);
}

TEST_CASE("same seed twice gives identical estimates") {
  SamplerConfig cfg;
  cfg.n_iter = 12;
  cfg.burn_in = 6;
  cfg.thinning = 2;
  cfg.rng_seed = 99;
  const auto prob = make_problem(6, 4, 2, 13);
  const PosteriorEstimate a =
      run_gibbs(prob.network, prob.cascades, prob.prior, cfg);
  const PosteriorEstimate b =
      run_gibbs(prob.network, prob.cascades, prob.prior, cfg);
  CHECK(a.X_bar == b.X_bar);
  CHECK(a.Y_bar == b.Y_bar);
  CHECK(a.U_bar == b.U_bar);
  CHECK(a.Xi_bar == b.Xi_bar);
}

TEST_CASE("forced-observation invariant holds after every sweep") {
  const auto prob = make_problem(8, 5, 2, 21);
  SamplerConfig cfg;
  cfg.n_iter = 15;
  cfg.burn_in = 10;
  cfg.rng_seed = 3;
  GibbsOptions opts;
  opts.on_iteration = [&](int, const LatentState& state) {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (prob.network.adjacency(i, j) == 1) CHECK(state.Xi(i, j) == 1);
  };
  run_gibbs(prob.network, prob.cascades, prob.prior, cfg, opts);
}

TEST_CASE("trace records the exact Beta posterior counts") {
  const auto prob = make_problem(6, 3, 2, 31);
  const int n2 = 6 * 6;
  SamplerConfig cfg;
  cfg.n_iter = 8;
  cfg.burn_in = 0;
  cfg.rng_seed = 17;
  std::vector<long long> sums;
  GibbsOptions opts;
  opts.on_iteration = [&](int, const LatentState& state) {
    sums.push_back(state.Xi.cast<long long>().sum());
  };
  const PosteriorEstimate est =
      run_gibbs(prob.network, prob.cascades, prob.prior, cfg, opts);
  REQUIRE(est.trace.size() == sums.size());
  for (std::size_t t = 0; t < sums.size(); ++t) {
    CHECK(est.trace[t].sum_xi == sums[t]);
    CHECK(est.trace[t].beta_a ==
          doctest::Approx(prob.prior.alpha1 + sums[t]));
    CHECK(est.trace[t].beta_b ==
          doctest::Approx(prob.prior.alpha2 + n2 - sums[t]));
    CHECK(est.trace[t].mu_xi > 0.0);
    CHECK(est.trace[t].mu_xi < 1.0);
  }
}

TEST_CASE("checkpoint resume reproduces the uninterrupted run") {
  const auto prob = make_problem(7, 4, 2, 41);
  SamplerConfig cfg;
  cfg.n_iter = 20;
  cfg.burn_in = 10;
  cfg.thinning = 2;
  cfg.rng_seed = 55;

  Checkpoint saved;
  bool have = false;
  GibbsOptions capture;
  capture.checkpoint_every = 13;
  capture.on_checkpoint = [&](const Checkpoint& ck) {
    if (ck.completed_iterations == 13) {
      saved = ck;
      have = true;
    }
  };
  const PosteriorEstimate full =
      run_gibbs(prob.network, prob.cascades, prob.prior, cfg, capture);
  REQUIRE(have);

  GibbsOptions resume;
  resume.resume_from = &saved;
  const PosteriorEstimate resumed =
      run_gibbs(prob.network, prob.cascades, prob.prior, cfg, resume);
  CHECK(resumed.X_bar == full.X_bar);
  CHECK(resumed.Y_bar == full.Y_bar);
  CHECK(resumed.U_bar == full.U_bar);
  CHECK(resumed.Xi_bar == full.Xi_bar);
  CHECK(resumed.n_retained == full.n_retained);
}

TEST_CASE("invalid sampler configs are rejected") {
  SamplerConfig cfg;
  cfg.n_iter = 10;
  cfg.burn_in = 10;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.burn_in = 5;
  cfg.thinning = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("initial state is valid and deterministic") {
  const auto prob = make_problem(5, 3, 2, 61);
  const LatentState a =
      initial_state(prob.network, prob.cascades, prob.prior, 9);
  const LatentState b =
      initial_state(prob.network, prob.cascades, prob.prior, 9);
  a.validate(prob.network);
  CHECK(a.X == b.X);
  CHECK(a.Lambda == b.Lambda);
  CHECK(a.mu_xi == b.mu_xi);
  CHECK((a.Lambda.array() > 0.0).all());
  CHECK(a.Xi == prob.network.adjacency);
}
