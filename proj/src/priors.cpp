#include "diffstru/priors.hpp"

namespace diffstru {

void SimilarityMatrix::validate() const {
  if (dim <= 0 || values.rows() != dim || values.cols() != dim)
    throw DataError("similarity matrix shaped " +
                    shape_str(values.rows(), values.cols()) +
                    " does not match dim=" + std::to_string(dim));
  if (!values.isApprox(values.transpose(), 1e-12))
    throw DataError("similarity matrix must be symmetric");
  if ((values.array() < 0.0).any())
    throw DataError("similarity entries must be non-negative");
  if (values.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw DataError("similarity diagonal must be zero");
}

SimilarityMatrix node_similarity(const ObservedNetwork& network) {
  network.validate();
  const int n = network.n_nodes;
  // Undirected-union neighborhood indicator.
  IntMatrix nb(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      nb(i, j) = (network.adjacency(i, j) || network.adjacency(j, i)) ? 1 : 0;
  SimilarityMatrix sim;
  sim.dim = n;
  sim.values =
      (nb.cast<double>() * nb.cast<double>().transpose());  // intersections
  sim.values.diagonal().setZero();
  return sim;
}

SimilarityMatrix cascade_similarity(const CascadeSet& cascades) {
  cascades.validate();
  SimilarityMatrix sim;
  sim.dim = cascades.n_cascades;
  const Matrix pi = cascades.pi().cast<double>();
  sim.values = pi.transpose() * pi;
  sim.values.diagonal().setZero();
  return sim;
}

Matrix laplacian_prior(const SimilarityMatrix& theta, double ridge) {
  theta.validate();
  if (ridge < 0.0) throw ConfigError("ridge must be non-negative");
  Matrix lap = -theta.values;
  lap.diagonal() = theta.values.colwise().sum();  // zeta_ii = sum_j Theta_ji
  lap.diagonal().array() += ridge;
  return lap;
}

}  // namespace diffstru
