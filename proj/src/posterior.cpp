#include "diffstru/posterior.hpp"

#include <cmath>

#include "diffstru/rng.hpp"

namespace diffstru {

bool is_diagonal(const Matrix& m, double tol) {
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

namespace {

MatrixGaussian solve_decoupled(std::vector<Matrix> blocks, Matrix rhs,
                               const char* what) {
  const int D = static_cast<int>(rhs.rows());
  const int K = static_cast<int>(rhs.cols());
  MatrixGaussian g;
  g.coupled = false;
  g.mean = Matrix(D, K);
  g.block_prec.reserve(K);
  for (int k = 0; k < K; ++k) {
    Eigen::LLT<Matrix> llt(blocks[k]);
    if (llt.info() != Eigen::Success)
      throw NumericError(std::string(what) + " posterior precision of block " +
                         std::to_string(k) + " is not positive definite");
    g.mean.col(k) = llt.solve(rhs.col(k));
    g.block_prec.push_back(std::move(llt));
  }
  return g;
}

MatrixGaussian solve_coupled(const std::vector<Matrix>& blocks,
                             const Matrix& inv_W, const Matrix& rhs,
                             const char* what) {
  const int D = static_cast<int>(rhs.rows());
  const int K = static_cast<int>(rhs.cols());
  Matrix prec = Matrix::Zero(D * K, D * K);
  for (int k = 0; k < K; ++k)
    prec.block(k * D, k * D, D, D) = blocks[k];
  // Row-prior coupling: kron(inv_W, I_D) in column-major vec ordering.
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l)
      if (inv_W(k, l) != 0.0)
        for (int d = 0; d < D; ++d) prec(k * D + d, l * D + d) += inv_W(k, l);
  MatrixGaussian g;
  g.coupled = true;
  g.dense_prec = Eigen::LLT<Matrix>(prec);
  if (g.dense_prec.info() != Eigen::Success)
    throw NumericError(std::string(what) +
                       " coupled posterior precision is not positive definite");
  Vector flat_rhs(D * K);
  for (int k = 0; k < K; ++k) flat_rhs.segment(k * D, D) = rhs.col(k);
  const Vector mean = g.dense_prec.solve(flat_rhs);
  g.mean = Matrix(D, K);
  for (int k = 0; k < K; ++k) g.mean.col(k) = mean.segment(k * D, D);
  return g;
}

MatrixGaussian solve(std::vector<Matrix> blocks, const Matrix& inv_W,
                     const Matrix& rhs, const char* what) {
  if (is_diagonal(inv_W)) {
    const int D = static_cast<int>(rhs.rows());
    for (int k = 0; k < static_cast<int>(blocks.size()); ++k)
      blocks[k] += inv_W(k, k) * Matrix::Identity(D, D);
    return solve_decoupled(std::move(blocks), rhs, what);
  }
  return solve_coupled(blocks, inv_W, rhs, what);
}

}  // namespace

Matrix MatrixGaussian::sample(std::uint64_t seed, std::uint64_t tag) const {
  const int d = D();
  const int k = K();
  Matrix out(d, k);
  if (!coupled) {
    for (int j = 0; j < k; ++j) {
      Rng rng = substream(seed, tag, static_cast<std::uint64_t>(j));
      std::normal_distribution<double> normal(0.0, 1.0);
      Vector z(d);
      for (int r = 0; r < d; ++r) z(r) = normal(rng);
      out.col(j) = mean.col(j) + block_prec[j].matrixU().solve(z);
    }
    return out;
  }
  Rng rng = substream(seed, tag);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(d * k);
  for (int r = 0; r < d * k; ++r) z(r) = normal(rng);
  const Vector v = dense_prec.matrixU().solve(z);
  for (int j = 0; j < k; ++j) out.col(j) = mean.col(j) + v.segment(j * d, d);
  return out;
}

Matrix MatrixGaussian::covariance() const {
  const int d = D();
  const int k = K();
  if (coupled) return dense_prec.solve(Matrix::Identity(d * k, d * k));
  Matrix cov = Matrix::Zero(d * k, d * k);
  for (int j = 0; j < k; ++j)
    cov.block(j * d, j * d, d, d) =
        block_prec[j].solve(Matrix::Identity(d, d));
  return cov;
}

Vector MatrixGaussian::vec_mean() const {
  Vector v(mean.size());
  for (int j = 0; j < K(); ++j) v.segment(j * D(), D()) = mean.col(j);
  return v;
}

MatrixGaussian y_posterior(const Matrix& X, const Matrix& C,
                           const IntMatrix& Pi, const PriorConfig& prior) {
  if (prior.sigma2_C <= 0.0)
    throw ConfigError("sigma2_C must be positive for inference");
  const int D = static_cast<int>(X.rows());
  const int N = static_cast<int>(X.cols());
  const int M = static_cast<int>(Pi.cols());
  const double inv_s2 = 1.0 / prior.sigma2_C;
  std::vector<Matrix> blocks(M);
  Matrix rhs = Matrix::Zero(D, M);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < M; ++j) {
    Matrix b = Matrix::Zero(D, D);
    Vector r = Vector::Zero(D);
    for (int i = 0; i < N; ++i)
      if (Pi(i, j)) {
        b.noalias() += inv_s2 * X.col(i) * X.col(i).transpose();
        r.noalias() += inv_s2 * C(i, j) * X.col(i);
      }
    blocks[j] = std::move(b);
    rhs.col(j) = r;
  }
  return solve(std::move(blocks), prior.inv_W_Y, rhs, "Y");
}

MatrixGaussian u_posterior(const Matrix& X, const Matrix& R,
                           const PriorConfig& prior) {
  if (prior.sigma2_R <= 0.0)
    throw ConfigError("sigma2_R must be positive for inference");
  const int N = static_cast<int>(X.cols());
  const double inv_s2 = 1.0 / prior.sigma2_R;
  const Matrix base = inv_s2 * (X * X.transpose());
  std::vector<Matrix> blocks(N, base);
  const Matrix rhs = inv_s2 * (X * R);  // column j regresses R_{:,j} on X
  return solve(std::move(blocks), prior.inv_W_U, rhs, "U");
}

MatrixGaussian x_posterior(const Matrix& Y, const Matrix& U, const Matrix& C,
                           const IntMatrix& Pi, const Matrix& R,
                           const PriorConfig& prior) {
  if (prior.sigma2_C <= 0.0 || prior.sigma2_R <= 0.0)
    throw ConfigError("noise variances must be positive for inference");
  const int D = static_cast<int>(Y.rows());
  const int N = static_cast<int>(Pi.rows());
  const int M = static_cast<int>(Pi.cols());
  const double inv_s2c = 1.0 / prior.sigma2_C;
  const double inv_s2r = 1.0 / prior.sigma2_R;
  const Matrix r_block = inv_s2r * (U * U.transpose());
  std::vector<Matrix> blocks(N);
  Matrix rhs = Matrix::Zero(D, N);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    Matrix b = r_block;
    Vector r = inv_s2r * (U * R.row(i).transpose());
    for (int j = 0; j < M; ++j)
      if (Pi(i, j)) {
        b.noalias() += inv_s2c * Y.col(j) * Y.col(j).transpose();
        r.noalias() += inv_s2c * C(i, j) * Y.col(j);
      }
    blocks[i] = std::move(b);
    rhs.col(i) = r;
  }
  return solve(std::move(blocks), prior.inv_W_X, rhs, "X");
}

}  // namespace diffstru
