#include "diffstru/predictor.hpp"

#include <cmath>
#include <random>

#include "diffstru/rng.hpp"
#include "doctest.h"

using namespace diffstru;

namespace {

// Inverse sigmoid, for building score targets.
double logit(double p) { return std::log(p / (1.0 - p)); }

PosteriorEstimate make_estimate(const Matrix& X, const Matrix& Y,
                                const Matrix& U, const Matrix& Xi_bar) {
  PosteriorEstimate est;
  est.X_bar = X;
  est.Y_bar = Y;
  est.U_bar = U;
  est.Xi_bar = Xi_bar;
  est.n_retained = 1;
  return est;
}

}  // namespace

TEST_CASE("link rule: accept, xi-veto, boundary") {
  // One dimension, two nodes; engineered scores on the off-diagonal cells.
  Matrix X(1, 2), U(1, 2), Y(1, 1);
  X << 1.0, 1.0;
  Y << 0.0;
  // score(0,1) = sigma(X_0 . U_1), score(1,0) = sigma(X_1 . U_0).
  U << 0.5, logit(0.7);
  ObservedNetwork net = ObservedNetwork::from_adjacency(IntMatrix::Zero(2, 2));

  Matrix xi = Matrix::Ones(2, 2);
  auto [g1, s1] = predict_links(make_estimate(X, Y, U, xi), net, 0.5);
  CHECK(s1(0, 1) == doctest::Approx(0.7));
  CHECK(g1(0, 1) == 1);

  // Indicator veto wins regardless of score.
  xi(0, 1) = 0.2;
  auto [g2, s2] = predict_links(make_estimate(X, Y, U, xi), net, 0.5);
  CHECK(g2(0, 1) == 0);

  // Score exactly at the threshold is excluded.
  xi.setOnes();
  U(0, 1) = logit(0.7);
  auto [g3, s3] = predict_links(make_estimate(X, Y, U, xi), net, 0.7);
  CHECK(s3(0, 1) == doctest::Approx(0.7));
  CHECK(g3(0, 1) == 0);
}

TEST_CASE("observed links pass through untouched") {
  Matrix X = Matrix::Zero(1, 2), U = Matrix::Zero(1, 2), Y(1, 1);
  Y << 0.0;
  IntMatrix adj = IntMatrix::Zero(2, 2);
  adj(1, 0) = 1;
  ObservedNetwork net = ObservedNetwork::from_adjacency(adj);
  const Matrix xi = Matrix::Zero(2, 2);  // veto everywhere
  auto [g, s] = predict_links(make_estimate(X, Y, U, xi), net, 0.5);
  CHECK(g(1, 0) == 1);  // observed, kept despite the veto
  CHECK(g(0, 1) == 0);
}

TEST_CASE("raising delta_G never adds links") {
  Rng rng(5);
  std::normal_distribution<double> normal;
  Matrix X(2, 6), U(2, 6), Y(2, 1);
  for (int j = 0; j < 6; ++j)
    for (int d = 0; d < 2; ++d) {
      X(d, j) = normal(rng);
      U(d, j) = normal(rng);
    }
  Y.setZero();
  ObservedNetwork net = ObservedNetwork::from_adjacency(IntMatrix::Zero(6, 6));
  const Matrix xi = Matrix::Ones(6, 6);
  IntMatrix prev;
  bool first = true;
  for (double delta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    auto [g, s] = predict_links(make_estimate(X, Y, U, xi), net, delta);
    if (!first) CHECK(((prev - g).array() >= 0).all());
    prev = g;
    first = false;
  }
}

TEST_CASE("transfer matrix hand cases") {
  // i=0 at t=1 in cascade 0 only; j=1 at t=2 in cascade 0 and t=3 in 1.
  CascadeSet cs = CascadeSet::empty(2, 2, 10.0);
  cs.set(0, 0, 1.0);
  cs.set(1, 0, 2.0);
  cs.set(1, 1, 3.0);
  const Matrix A = infection_transfer(cs);
  CHECK(A(0, 1) == doctest::Approx(0.5));  // 1 ordered pair / 2 with either
  CHECK(A(1, 0) == doctest::Approx(0.0));
  CHECK(A(0, 0) == 0.0);

  // Never co-infected, one appearance each: 0/2 = 0.
  CascadeSet cs2 = CascadeSet::empty(2, 2, 10.0);
  cs2.set(0, 0, 1.0);
  cs2.set(1, 1, 1.0);
  CHECK(infection_transfer(cs2).isZero(0.0));
}

TEST_CASE("transfer matrix equals brute-force enumeration") {
  Rng rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 10, m = 15;
  CascadeSet cs = CascadeSet::empty(n, m, 1.0);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < m; ++c)
      if (unif(rng) < 0.35) cs.set(v, c, unif(rng));
  const Matrix A = infection_transfer(cs);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        CHECK(A(i, j) == 0.0);
        continue;
      }
      int ordered = 0, either = 0;
      for (int c = 0; c < m; ++c) {
        const bool oi = cs.is_observed(i, c), oj = cs.is_observed(j, c);
        if (oi || oj) ++either;
        if (oi && oj && cs.times(i, c) < cs.times(j, c)) ++ordered;
      }
      const double expect =
          either == 0 ? 0.0 : static_cast<double>(ordered) / either;
      CHECK(A(i, j) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("transfer matrix ignores cascade relabeling") {
  Rng rng(78);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 6, m = 8;
  CascadeSet cs = CascadeSet::empty(n, m, 1.0);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < m; ++c)
      if (unif(rng) < 0.4) cs.set(v, c, unif(rng));
  CascadeSet shuffled = CascadeSet::empty(n, m, 1.0);
  std::vector<int> perm = {5, 2, 7, 0, 3, 6, 1, 4};
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < m; ++c)
      if (cs.is_observed(v, c)) shuffled.set(v, perm[c], cs.times(v, c));
  CHECK(infection_transfer(cs).isApprox(infection_transfer(shuffled), 1e-14));
}

TEST_CASE("infection probability hand cases and oracle") {
  const int n = 5, m = 4;
  CascadeSet cs = CascadeSet::empty(n, m, 1.0);
  Rng rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < m; ++c)
      if (unif(rng) < 0.5) cs.set(v, c, unif(rng));

  CHECK(infection_probability(cs, Matrix::Zero(n, n)).isZero(0.0));

  const Matrix A = infection_transfer(cs);
  const Matrix P = infection_probability(cs, A);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      double expect = 0.0;
      for (int k = 0; k < n; ++k)
        if (cs.is_observed(k, j)) expect += A(k, i);
      CHECK(P(i, j) == doctest::Approx(expect).epsilon(1e-12));
    }

  // One-hot column: single observed node k in a fresh cascade.
  CascadeSet one = CascadeSet::empty(n, 1, 1.0);
  one.set(2, 0, 0.5);
  const Matrix P1 = infection_probability(one, A);
  for (int i = 0; i < n; ++i) CHECK(P1(i, 0) == doctest::Approx(A(2, i)));
}

TEST_CASE("cascade rule branches") {
  // Two nodes, one cascade, T_obs = 10; node 0 observed at 1.0.
  const double T = 10.0;
  CascadeSet cs = CascadeSet::empty(2, 1, T);
  cs.set(0, 0, 1.0);
  Matrix Y(1, 1);
  Matrix X(1, 2), U = Matrix::Zero(1, 2);
  X << 1.0, 1.0;

  auto run = [&](double z, double p, double delta_C) {
    Y << z;
    PosteriorEstimate est =
        make_estimate(X, Y, U, Matrix::Ones(2, 2));
    Matrix P = Matrix::Constant(2, 1, p);
    return predict_cascades(est, cs, P, delta_C);
  };

  // Negative time is rejected.
  auto [inf1, t1] = run(-0.3, 0.9, 0.1);
  CHECK(inf1(1, 0) == 0);

  // Accept branch: z inside the window and P over the threshold.
  auto [inf2, t2] = run(0.4 * T, 0.9, 0.1);
  CHECK(inf2(1, 0) == 1);
  CHECK(t2(1, 0) == doctest::Approx(0.4 * T));

  // P exactly at delta_C is excluded.
  auto [inf3, t3] = run(0.4 * T, 0.1, 0.1);
  CHECK(inf3(1, 0) == 0);

  // z beyond the window is rejected even with strong P.
  auto [inf4, t4] = run(1.5 * T, 0.9, 0.1);
  CHECK(inf4(1, 0) == 0);

  // Observed cells pass through unconditionally.
  auto [inf5, t5] = run(-0.3, 0.0, 0.9);
  CHECK(inf5(0, 0) == 1);
  CHECK(t5(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("raising delta_C never adds predicted infections") {
  Rng rng(123);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 6, m = 5;
  CascadeSet cs = CascadeSet::empty(n, m, 5.0);
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < m; ++c)
      if (unif(rng) < 0.3) cs.set(v, c, 5.0 * unif(rng));
  Matrix X(2, n), Y(2, m);
  for (int j = 0; j < n; ++j)
    for (int d = 0; d < 2; ++d) X(d, j) = normal(rng);
  for (int j = 0; j < m; ++j)
    for (int d = 0; d < 2; ++d) Y(d, j) = normal(rng);
  PosteriorEstimate est =
      make_estimate(X, Y, Matrix::Zero(2, n), Matrix::Ones(n, n));
  Matrix P(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) P(i, j) = unif(rng);

  IntMatrix prev;
  bool first = true;
  for (double delta : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    auto [inf, t] = predict_cascades(est, cs, P, delta);
    if (!first) CHECK(((prev - inf).array() >= 0).all());
    prev = inf;
    first = false;
  }
}

TEST_CASE("default delta_C is the mean of P") {
  Matrix P(2, 2);
  P << 0.1, 0.2, 0.3, 0.6;
  CHECK(default_delta_C(P) == doctest::Approx(0.3));
}

TEST_CASE("bad delta_G is a config error") {
  PosteriorEstimate est = make_estimate(Matrix::Zero(1, 2), Matrix::Zero(1, 1),
                                        Matrix::Zero(1, 2), Matrix::Ones(2, 2));
  ObservedNetwork net = ObservedNetwork::from_adjacency(IntMatrix::Zero(2, 2));
  CHECK_THROWS_AS(predict_links(est, net, 0.0), ConfigError);
  CHECK_THROWS_AS(predict_links(est, net, 1.0), ConfigError);
}
