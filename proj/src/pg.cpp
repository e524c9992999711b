#include "diffstru/pg.hpp"

#include <cmath>

namespace diffstru {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTrunc = 0.64;  // series crossover point

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// CDF of InverseGaussian(mu = 1/z, lambda = 1) at t, valid for z >= 0.
double inv_gauss_cdf(double t, double z) {
  const double s = 1.0 / std::sqrt(t);
  const double b = s * t * z - s;
  const double a = -s * t * z - s;
  // exp(2z) * Phi(a) written stably through the log.
  double tail = 0.0;
  const double phi_a = normal_cdf(a);
  if (phi_a > 0.0) tail = std::exp(2.0 * z + std::log(phi_a));
  return normal_cdf(b) + tail;
}

// Piecewise coefficients a_n(x) of the Jacobi-theta alternating series.
double series_coef(int n, double x) {
  const double h = n + 0.5;
  if (x <= kTrunc) {
    return kPi * h * std::pow(2.0 / (kPi * x), 1.5) *
           std::exp(-2.0 * h * h / x);
  }
  return kPi * h * std::exp(-h * h * kPi * kPi * x / 2.0);
}

// InverseGaussian(mu = 1/z, lambda = 1) truncated to (0, kTrunc).
double truncated_inv_gauss(double z, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const double mu = 1.0 / z;
  for (;;) {
    if (mu > kTrunc || !std::isfinite(mu)) {
      // One-sided chi-square proposal, then exponential tilt acceptance.
      double e1, e2;
      do {
        e1 = expo(rng);
        e2 = expo(rng);
      } while (e1 * e1 > 2.0 * e2 / kTrunc);
      const double x = kTrunc / ((1.0 + kTrunc * e1) * (1.0 + kTrunc * e1));
      if (unif(rng) <= std::exp(-0.5 * z * z * x)) return x;
    } else {
      // Plain IG draw, retried until it lands inside the truncation.
      const double nu = normal(rng);
      const double y = nu * nu;
      double x = mu + 0.5 * mu * mu * y -
                 0.5 * mu * std::sqrt(4.0 * mu * y + mu * mu * y * y);
      if (unif(rng) > mu / (mu + x)) x = mu * mu / x;
      if (x <= kTrunc) return x;
    }
  }
}

}  // namespace

double pg_draw(double c, Rng& rng) {
  const double z = std::abs(c) * 0.5;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  const double k = kPi * kPi / 8.0 + z * z / 2.0;
  const double p = (kPi / (2.0 * k)) * std::exp(-k * kTrunc);
  const double q = 2.0 * std::exp(-z) * inv_gauss_cdf(kTrunc, z);
  const double p_right = p / (p + q);

  for (;;) {
    double x;
    if (unif(rng) < p_right) {
      x = kTrunc + expo(rng) / k;  // tail: truncated exponential
    } else {
      x = truncated_inv_gauss(z, rng);
    }
    // Squeeze acceptance on the alternating series.
    double s = series_coef(0, x);
    const double y = unif(rng) * s;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        s -= series_coef(n, x);
        if (y <= s) return x * 0.25;
      } else {
        s += series_coef(n, x);
        if (y > s) break;  // reject, redraw proposal
      }
    }
  }
}

}  // namespace diffstru
