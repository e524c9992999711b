// Timing comparison between the serial reference kernels and their OpenMP
// variants, plus a correctness cross-check (the two must agree bitwise).

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "diffstru/kernels.hpp"
#include "diffstru/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace diffstru;

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto start = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         reps;
}

}  // namespace

int main(int argc, char** argv) {
  int n = 400;
  int reps = 5;
  if (argc > 1) n = std::stoi(argv[1]);
  if (argc > 2) reps = std::stoi(argv[2]);

#ifdef _OPENMP
  std::printf("n=%d reps=%d threads=%d\n", n, reps, omp_get_max_threads());
#else
  std::printf("n=%d reps=%d (OpenMP disabled)\n", n, reps);
#endif

  Rng rng(1);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix XtU(n, n), Lambda(n, n);
  IntMatrix G = IntMatrix::Zero(n, n), Xi = IntMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      XtU(i, j) = normal(rng);
      Lambda(i, j) = std::abs(normal(rng)) + 0.1;
      if (i != j && unif(rng) < 0.1) G(i, j) = 1;
      if (G(i, j) || unif(rng) < 0.3) Xi(i, j) = 1;
    }

  Matrix Rs = Matrix::Zero(n, n), Rp = Matrix::Zero(n, n);
  const double r_serial = time_ms(
      [&] {
        kernels::sample_r_serial(Rs, Xi, G, XtU, Lambda, 1.0, false, 7, 10);
      },
      reps);
  const double r_omp = time_ms(
      [&] { kernels::sample_r_omp(Rp, Xi, G, XtU, Lambda, 1.0, false, 7, 10); },
      reps);
  const bool r_match = Rs == Rp;

  IntMatrix Xis = Xi, Xip = Xi;
  const double xi_serial = time_ms(
      [&] { kernels::sample_xi_serial(Xis, G, Rs, 0.4, 7, 11); }, reps);
  const double xi_omp =
      time_ms([&] { kernels::sample_xi_omp(Xip, G, Rs, 0.4, 7, 11); }, reps);
  const bool xi_match = Xis == Xip;

  Matrix Ls = Matrix::Zero(n, n), Lp = Matrix::Zero(n, n);
  const double l_serial = time_ms(
      [&] { kernels::sample_lambda_serial(Ls, Rs, 7, 15); }, reps);
  const double l_omp =
      time_ms([&] { kernels::sample_lambda_omp(Lp, Rs, 7, 15); }, reps);
  const bool l_match = Ls == Lp;

  std::printf("%-14s %12s %12s %9s %s\n", "kernel", "serial(ms)", "omp(ms)",
              "speedup", "bitwise");
  std::printf("%-14s %12.3f %12.3f %8.2fx %s\n", "sample_r", r_serial, r_omp,
              r_serial / r_omp, r_match ? "match" : "MISMATCH");
  std::printf("%-14s %12.3f %12.3f %8.2fx %s\n", "sample_xi", xi_serial,
              xi_omp, xi_serial / xi_omp, xi_match ? "match" : "MISMATCH");
  std::printf("%-14s %12.3f %12.3f %8.2fx %s\n", "sample_lambda", l_serial,
              l_omp, l_serial / l_omp, l_match ? "match" : "MISMATCH");

  return (r_match && xi_match && l_match) ? 0 : 1;
}
