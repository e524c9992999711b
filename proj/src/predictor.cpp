#include "diffstru/predictor.hpp"

namespace diffstru {

std::pair<IntMatrix, Matrix> predict_links(const PosteriorEstimate& est,
                                           const ObservedNetwork& network,
                                           double delta_G) {
  if (!(delta_G > 0.0 && delta_G < 1.0))
    throw ConfigError("delta_G must lie in (0,1)");
  const int N = network.n_nodes;
  if (est.X_bar.cols() != N || est.U_bar.cols() != N)
    throw DataError("estimate has " + std::to_string(est.X_bar.cols()) +
                    " nodes, network has " + std::to_string(N));
  Matrix score(N, N);
  IntMatrix g_hat(N, N);
  const Matrix XtU = est.X_bar.transpose() * est.U_bar;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      score(i, j) = logistic(XtU(i, j));
      if (network.mask(i, j)) {
        g_hat(i, j) = network.adjacency(i, j);
      } else if (est.Xi_bar(i, j) < 0.5 || score(i, j) <= delta_G || i == j) {
        g_hat(i, j) = 0;
      } else {
        g_hat(i, j) = 1;
      }
    }
  return {std::move(g_hat), std::move(score)};
}

Matrix infection_transfer(const CascadeSet& cascades) {
  cascades.validate();
  const int N = cascades.n_nodes;
  const int M = cascades.n_cascades;
  Matrix A = Matrix::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      int ordered = 0;
      int either = 0;
      for (int c = 0; c < M; ++c) {
        const bool oi = cascades.is_observed(i, c);
        const bool oj = cascades.is_observed(j, c);
        if (oi || oj) ++either;
        if (oi && oj && cascades.times(i, c) < cascades.times(j, c)) ++ordered;
      }
      A(i, j) = either == 0 ? 0.0 : static_cast<double>(ordered) / either;
    }
  return A;
}

Matrix infection_probability(const CascadeSet& cascades, const Matrix& A,
                             bool row_normalized_alternative) {
  const int N = cascades.n_nodes;
  if (A.rows() != N || A.cols() != N)
    throw DataError("transfer matrix shaped " + shape_str(A.rows(), A.cols()) +
                    ", expected " + shape_str(N, N));
  const Matrix pi = cascades.pi().cast<double>();
  if (!row_normalized_alternative) {
    // P[i][j] = sum_k Pi[k][j] A[k][i]
    return A.transpose() * pi;
  }
  Matrix row_norm = A;
  for (int i = 0; i < N; ++i) {
    const double s = A.row(i).sum();
    if (s > 0.0) row_norm.row(i) /= s;
  }
  return row_norm.transpose() * pi;
}

std::pair<IntMatrix, Matrix> predict_cascades(const PosteriorEstimate& est,
                                              const CascadeSet& cascades,
                                              const Matrix& P, double delta_C) {
  const int N = cascades.n_nodes;
  const int M = cascades.n_cascades;
  IntMatrix infected = IntMatrix::Zero(N, M);
  Matrix times = Matrix::Zero(N, M);
  const Matrix XtY = est.X_bar.transpose() * est.Y_bar;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) {
      if (cascades.is_observed(i, j)) {
        infected(i, j) = 1;
        times(i, j) = cascades.times(i, j);
        continue;
      }
      const double z = XtY(i, j);
      if (P(i, j) <= delta_C || z < 0.0 || z > cascades.window) continue;
      infected(i, j) = 1;
      times(i, j) = z;
    }
  return {std::move(infected), std::move(times)};
}

double default_delta_C(const Matrix& P) { return P.mean(); }

PredictionResult predict(const PosteriorEstimate& est,
                         const ObservedNetwork& network,
                         const CascadeSet& cascades, double delta_G,
                         bool row_normalized_alternative) {
  PredictionResult out;
  std::tie(out.G_hat, out.G_score) = predict_links(est, network, delta_G);
  out.A = infection_transfer(cascades);
  out.P = infection_probability(cascades, out.A, row_normalized_alternative);
  std::tie(out.C_hat_infected, out.C_hat_times) =
      predict_cascades(est, cascades, out.P, default_delta_C(out.P));
  return out;
}

}  // namespace diffstru
