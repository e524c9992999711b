#include "diffstru/kernels.hpp"

#include <cmath>
#include <random>

#include "diffstru/pg.hpp"
#include "diffstru/rng.hpp"
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace diffstru;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

}  // namespace

TEST_CASE("R update: unobserved cell falls back to the prior mean") {
  const int n = 1;
  Matrix XtU(n, n), Lambda(n, n), R(n, n);
  XtU << 0.7;
  Lambda << 2.0;
  R.setZero();
  const IntMatrix Xi = IntMatrix::Zero(n, n);
  const IntMatrix G = IntMatrix::Zero(n, n);
  // Draw many times; the conditional is N(0.7, 1) when Xi = 0.
  double sum = 0.0;
  const int reps = 100000;
  for (int k = 0; k < reps; ++k) {
    kernels::sample_r_serial(R, Xi, G, XtU, Lambda, 1.0, false, 1000 + k, 1);
    sum += R(0, 0);
  }
  CHECK(std::abs(sum / reps - 0.7) < 3.0 / std::sqrt(reps));
}

TEST_CASE("R update: printed-rule mean on an observed link") {
  Matrix XtU(1, 1), Lambda(1, 1), R(1, 1);
  XtU << 0.5;
  Lambda << 1.0;
  IntMatrix Xi = IntMatrix::Ones(1, 1), G = IntMatrix::Ones(1, 1);
  // mu = (1*(1-0.5)*1 + 0.5) / (1*1*1 + 1) = 0.5; variance 1.
  double sum = 0.0;
  const int reps = 100000;
  for (int k = 0; k < reps; ++k) {
    kernels::sample_r_serial(R, Xi, G, XtU, Lambda, 1.0, false, 2000 + k, 1);
    sum += R(0, 0);
  }
  CHECK(std::abs(sum / reps - 0.5) < 3.0 / std::sqrt(reps));
}

TEST_CASE("R update: derived precision changes the variance") {
  Matrix XtU = Matrix::Zero(1, 1), Lambda(1, 1), R(1, 1);
  Lambda << 3.0;
  IntMatrix Xi = IntMatrix::Ones(1, 1), G = IntMatrix::Ones(1, 1);
  const int reps = 200000;
  double sq = 0.0, sum = 0.0;
  for (int k = 0; k < reps; ++k) {
    kernels::sample_r_serial(R, Xi, G, XtU, Lambda, 1.0, true, 3000 + k, 1);
    sum += R(0, 0);
    sq += R(0, 0) * R(0, 0);
  }
  const double mean = sum / reps;
  const double var = sq / reps - mean * mean;
  // prec = Xi*Lambda + 1/s2R = 4 -> variance 0.25.
  CHECK(std::abs(var - 0.25) < 0.01);
}

TEST_CASE("Xi forced to one on observed links") {
  Rng rng(9);
  const int n = 8;
  const Matrix R = random_matrix(n, n, rng);
  IntMatrix G = IntMatrix::Zero(n, n);
  G(0, 1) = G(3, 2) = G(7, 0) = 1;
  IntMatrix Xi = IntMatrix::Zero(n, n);
  for (int k = 0; k < 50; ++k) {
    kernels::sample_xi_serial(Xi, G, R, 0.5, 77 + k, 2);
    CHECK(Xi(0, 1) == 1);
    CHECK(Xi(3, 2) == 1);
    CHECK(Xi(7, 0) == 1);
  }
}

TEST_CASE("Xi rate matches xi = mu(1-f)/(1-mu f)") {
  // mu = 0.5, R = 0 -> f = 0.5 -> xi = 0.25 / 0.75 = 1/3.
  const int n = 64;
  const Matrix R = Matrix::Zero(n, n);
  const IntMatrix G = IntMatrix::Zero(n, n);
  IntMatrix Xi = IntMatrix::Zero(n, n);
  long long ones = 0, total = 0;
  for (int k = 0; k < 64; ++k) {
    kernels::sample_xi_serial(Xi, G, R, 0.5, 500 + k, 2);
    ones += Xi.cast<long long>().sum();
    total += n * n;
  }
  const double p = 1.0 / 3.0;
  const double se = std::sqrt(p * (1 - p) / total);
  CHECK(std::abs(static_cast<double>(ones) / total - p) < 4 * se);
}

TEST_CASE("Xi rate collapses for a confident unobserved link") {
  // R large -> f -> 1 -> xi -> 0.
  const int n = 32;
  const Matrix R = Matrix::Constant(n, n, 40.0);
  const IntMatrix G = IntMatrix::Zero(n, n);
  IntMatrix Xi = IntMatrix::Ones(n, n);
  kernels::sample_xi_serial(Xi, G, R, 0.5, 31, 2);
  CHECK(Xi.sum() == 0);
}

TEST_CASE("Lambda draws match PG moments") {
  const int n = 200;
  Matrix R = Matrix::Constant(n, n, 2.0);
  Matrix Lambda = Matrix::Zero(n, n);
  kernels::sample_lambda_serial(Lambda, R, 4242, 3);
  const double target = std::tanh(1.0) / 4.0;
  CHECK(std::abs(Lambda.mean() - target) < 0.01 * target);
  CHECK((Lambda.array() > 0.0).all());
}

TEST_CASE("serial and OpenMP kernels agree bitwise") {
  Rng rng(123);
  const int n = 37;
  const Matrix XtU = random_matrix(n, n, rng);
  const Matrix Lambda = (random_matrix(n, n, rng).array().abs() + 0.1).matrix();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  IntMatrix G = IntMatrix::Zero(n, n), Xi = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && unif(rng) < 0.2) G(i, j) = 1;
      if (unif(rng) < 0.5) Xi(i, j) = 1;
    }
  Xi = (Xi.array().max(G.array())).matrix();

  Matrix Rs = Matrix::Zero(n, n), Rp = Matrix::Zero(n, n);
  kernels::sample_r_serial(Rs, Xi, G, XtU, Lambda, 1.0, false, 2024, 10);
  kernels::sample_r_omp(Rp, Xi, G, XtU, Lambda, 1.0, false, 2024, 10);
  CHECK(Rs == Rp);

  IntMatrix Xis = Xi, Xip = Xi;
  kernels::sample_xi_serial(Xis, G, Rs, 0.4, 2024, 11);
  kernels::sample_xi_omp(Xip, G, Rs, 0.4, 2024, 11);
  CHECK(Xis == Xip);

  Matrix Ls = Matrix::Zero(n, n), Lp = Matrix::Zero(n, n);
  kernels::sample_lambda_serial(Ls, Rs, 2024, 15);
  kernels::sample_lambda_omp(Lp, Rs, 2024, 15);
  CHECK(Ls == Lp);

#ifdef _OPENMP
  // Agreement must hold at every thread count, not just the default.
  const int saved = omp_get_max_threads();
  for (int t : {1, 2, 5}) {
    omp_set_num_threads(t);
    Matrix Rt = Matrix::Zero(n, n);
    kernels::sample_r_omp(Rt, Xi, G, XtU, Lambda, 1.0, false, 2024, 10);
    CHECK(Rt == Rs);
    Matrix Lt = Matrix::Zero(n, n);
    kernels::sample_lambda_omp(Lt, Rs, 2024, 15);
    CHECK(Lt == Ls);
  }
  omp_set_num_threads(saved);
#endif
}
