#include "diffstru/kernels.hpp"

#include <cmath>

#include "diffstru/pg.hpp"
#include "diffstru/rng.hpp"

namespace diffstru::kernels {

namespace {

constexpr double kSigmoidEps = 1e-12;

inline void sample_r_row(int i, Matrix& R, const IntMatrix& Xi,
                         const IntMatrix& G, const Matrix& XtU,
                         const Matrix& Lambda, double sigma2_R,
                         bool derived_precision, std::uint64_t seed,
                         std::uint64_t tag) {
  Rng rng = substream(seed, tag, static_cast<std::uint64_t>(i));
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = static_cast<int>(R.cols());
  for (int j = 0; j < n; ++j) {
    const double xi = Xi(i, j);
    const double g_shift = xi * (G(i, j) - 0.5);
    double mu, sd;
    if (derived_precision) {
      const double prec = xi * Lambda(i, j) + 1.0 / sigma2_R;
      mu = (g_shift + XtU(i, j) / sigma2_R) / prec;
      sd = 1.0 / std::sqrt(prec);
    } else {
      mu = (g_shift * sigma2_R + XtU(i, j)) /
           (xi * Lambda(i, j) * sigma2_R + 1.0);
      sd = 1.0;
    }
    R(i, j) = mu + sd * normal(rng);
  }
}

inline void sample_xi_row(int i, IntMatrix& Xi, const IntMatrix& G,
                          const Matrix& R, double mu_xi, std::uint64_t seed,
                          std::uint64_t tag) {
  Rng rng = substream(seed, tag, static_cast<std::uint64_t>(i));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = static_cast<int>(Xi.cols());
  for (int j = 0; j < n; ++j) {
    if (G(i, j) == 1) {
      Xi(i, j) = 1;
      continue;
    }
    double f = logistic(R(i, j));
    f = std::min(std::max(f, kSigmoidEps), 1.0 - kSigmoidEps);
    const double xi = (mu_xi - mu_xi * f) / (1.0 - mu_xi * f);
    if (!(xi >= 0.0 && xi <= 1.0))
      throw NumericError("Bernoulli parameter for Xi left [0,1]");
    Xi(i, j) = unif(rng) < xi ? 1 : 0;
  }
}

inline void sample_lambda_row(int i, Matrix& Lambda, const Matrix& R,
                              std::uint64_t seed, std::uint64_t tag) {
  Rng rng = substream(seed, tag, static_cast<std::uint64_t>(i));
  const int n = static_cast<int>(Lambda.cols());
  for (int j = 0; j < n; ++j) Lambda(i, j) = pg_draw(R(i, j), rng);
}

}  // namespace

void sample_r_serial(Matrix& R, const IntMatrix& Xi, const IntMatrix& G,
                     const Matrix& XtU, const Matrix& Lambda, double sigma2_R,
                     bool derived_precision, std::uint64_t seed,
                     std::uint64_t tag) {
  const int n = static_cast<int>(R.rows());
  for (int i = 0; i < n; ++i)
    sample_r_row(i, R, Xi, G, XtU, Lambda, sigma2_R, derived_precision, seed,
                 tag);
}

void sample_r_omp(Matrix& R, const IntMatrix& Xi, const IntMatrix& G,
                  const Matrix& XtU, const Matrix& Lambda, double sigma2_R,
                  bool derived_precision, std::uint64_t seed,
                  std::uint64_t tag) {
  const int n = static_cast<int>(R.rows());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    sample_r_row(i, R, Xi, G, XtU, Lambda, sigma2_R, derived_precision, seed,
                 tag);
}

void sample_xi_serial(IntMatrix& Xi, const IntMatrix& G, const Matrix& R,
                      double mu_xi, std::uint64_t seed, std::uint64_t tag) {
  const int n = static_cast<int>(Xi.rows());
  for (int i = 0; i < n; ++i) sample_xi_row(i, Xi, G, R, mu_xi, seed, tag);
}

void sample_xi_omp(IntMatrix& Xi, const IntMatrix& G, const Matrix& R,
                   double mu_xi, std::uint64_t seed, std::uint64_t tag) {
  const int n = static_cast<int>(Xi.rows());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) sample_xi_row(i, Xi, G, R, mu_xi, seed, tag);
}

void sample_lambda_serial(Matrix& Lambda, const Matrix& R, std::uint64_t seed,
                          std::uint64_t tag) {
  const int n = static_cast<int>(Lambda.rows());
  for (int i = 0; i < n; ++i) sample_lambda_row(i, Lambda, R, seed, tag);
}

void sample_lambda_omp(Matrix& Lambda, const Matrix& R, std::uint64_t seed,
                       std::uint64_t tag) {
  const int n = static_cast<int>(Lambda.rows());
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) sample_lambda_row(i, Lambda, R, seed, tag);
}

}  // namespace diffstru::kernels
