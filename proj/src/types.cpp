#include "diffstru/types.hpp"

#include <cmath>

#include "diffstru/rng.hpp"

namespace diffstru {

ObservedNetwork ObservedNetwork::from_adjacency(IntMatrix adj) {
  IntMatrix mask = adj;
  return from_adjacency(std::move(adj), std::move(mask));
}

ObservedNetwork ObservedNetwork::from_adjacency(IntMatrix adj, IntMatrix mask) {
  ObservedNetwork net;
  net.n_nodes = static_cast<int>(adj.rows());
  net.adjacency = std::move(adj);
  net.mask = std::move(mask);
  net.validate();
  return net;
}

void ObservedNetwork::validate() const {
  if (n_nodes <= 0) throw DataError("network must have at least one node");
  if (adjacency.rows() != n_nodes || adjacency.cols() != n_nodes)
    throw DataError("adjacency shape " +
                    shape_str(adjacency.rows(), adjacency.cols()) +
                    " does not match n_nodes=" + std::to_string(n_nodes));
  if (mask.rows() != n_nodes || mask.cols() != n_nodes)
    throw DataError("mask shape " + shape_str(mask.rows(), mask.cols()) +
                    " does not match n_nodes=" + std::to_string(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    if (adjacency(i, i) != 0)
      throw DataError("self link at node " + std::to_string(i));
    for (int j = 0; j < n_nodes; ++j) {
      const int a = adjacency(i, j);
      const int m = mask(i, j);
      if ((a != 0 && a != 1) || (m != 0 && m != 1))
        throw DataError("adjacency/mask entries must be binary");
      if (a == 1 && m == 0)
        throw DataError("link (" + std::to_string(i) + "," + std::to_string(j) +
                        ") present but not marked observed");
    }
  }
}

CascadeSet CascadeSet::empty(int n_nodes, int n_cascades, double window) {
  CascadeSet cs;
  cs.n_nodes = n_nodes;
  cs.n_cascades = n_cascades;
  cs.window = window;
  cs.times = Matrix::Zero(n_nodes, n_cascades);
  cs.observed = IntMatrix::Zero(n_nodes, n_cascades);
  cs.validate();
  return cs;
}

void CascadeSet::set(int node, int cascade, double time) {
  times(node, cascade) = time;
  observed(node, cascade) = 1;
}

void CascadeSet::clear(int node, int cascade) {
  times(node, cascade) = 0.0;
  observed(node, cascade) = 0;
}

void CascadeSet::validate() const {
  if (n_nodes <= 0 || n_cascades <= 0)
    throw DataError("cascade set needs positive node and cascade counts");
  if (window <= 0.0) throw DataError("observation window must be positive");
  if (times.rows() != n_nodes || times.cols() != n_cascades ||
      observed.rows() != n_nodes || observed.cols() != n_cascades)
    throw DataError("cascade matrices shaped " +
                    shape_str(times.rows(), times.cols()) +
                    " do not match declared " + shape_str(n_nodes, n_cascades));
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 0; j < n_cascades; ++j) {
      const int o = observed(i, j);
      if (o != 0 && o != 1) throw DataError("Pi entries must be binary");
      if (o == 1 && source_anchored) {
        const double t = times(i, j);
        if (!(t >= 0.0 && t <= window))
          throw DataError("hit time " + std::to_string(t) + " outside [0, " +
                          std::to_string(window) + "]");
      }
    }
}

void LatentState::validate(const ObservedNetwork& network) const {
  const int n = network.n_nodes;
  if (!(mu_xi > 0.0 && mu_xi < 1.0))
    throw NumericError("mu_xi must lie strictly inside (0,1)");
  if ((Lambda.array() <= 0.0).any())
    throw NumericError("Polya-Gamma auxiliaries must be strictly positive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (network.adjacency(i, j) == 1 && Xi(i, j) != 1)
        throw NumericError("Xi must be 1 on every observed-link cell");
}

PriorConfig PriorConfig::identity(int n_nodes, int n_cascades, int D) {
  PriorConfig p;
  p.inv_W_X = Matrix::Identity(n_nodes, n_nodes);
  p.inv_W_U = Matrix::Identity(n_nodes, n_nodes);
  p.inv_W_Y = Matrix::Identity(n_cascades, n_cascades);
  p.D = D;
  return p;
}

void PriorConfig::validate(int n_nodes, int n_cascades) const {
  if (D <= 0) throw ConfigError("latent dimension D must be positive");
  // Zero variance is admitted for the noiseless generative limit; inference
  // paths that divide by a variance check positivity themselves.
  if (sigma2_C < 0.0 || sigma2_R < 0.0)
    throw ConfigError("noise variances must be non-negative");
  if (alpha1 <= 0.0 || alpha2 <= 0.0)
    throw ConfigError("Beta hyper-parameters must be positive");
  auto check_psd = [](const Matrix& m, int dim, const char* name) {
    if (m.rows() != dim || m.cols() != dim)
      throw ConfigError(std::string(name) + " shaped " +
                        shape_str(m.rows(), m.cols()) + ", expected " +
                        shape_str(dim, dim));
    if (!m.isApprox(m.transpose(), 1e-10))
      throw ConfigError(std::string(name) + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw ConfigError(std::string(name) + " is not positive semidefinite");
  };
  check_psd(inv_W_X, n_nodes, "inv_W_X");
  check_psd(inv_W_U, n_nodes, "inv_W_U");
  check_psd(inv_W_Y, n_cascades, "inv_W_Y");
}

void SamplerConfig::validate() const {
  if (n_iter <= 0) throw ConfigError("n_iter must be positive");
  if (burn_in < 0 || burn_in >= n_iter)
    throw ConfigError("burn_in must satisfy 0 <= burn_in < n_iter");
  if (thinning <= 0) throw ConfigError("thinning must be positive");
  if (n_iter - burn_in < thinning)
    throw ConfigError("no retained draw: (n_iter - burn_in) < thinning");
}

std::pair<IntMatrix, IntMatrix> build_masks(const ObservedNetwork& network,
                                            const CascadeSet& cascades) {
  network.validate();
  cascades.validate();
  if (network.n_nodes != cascades.n_nodes)
    throw DataError("network has " + std::to_string(network.n_nodes) +
                    " nodes but cascade set has " +
                    std::to_string(cascades.n_nodes));
  return {network.mask, cascades.pi()};
}

double logistic(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

// Draw each row of a D x K matrix from N(0, W) where inv_W = L L^T; a row is
// L^{-T} z for z ~ N(0, I).
Matrix sample_rows_from_precision(const Matrix& inv_W, int D,
                                  std::uint64_t seed, std::uint64_t tag) {
  const int K = static_cast<int>(inv_W.rows());
  Eigen::LLT<Matrix> llt(inv_W);
  if (llt.info() != Eigen::Success)
    throw NumericError("prior precision is not positive definite");
  Matrix out(D, K);
  for (int d = 0; d < D; ++d) {
    Rng rng = substream(seed, tag, static_cast<std::uint64_t>(d));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector z(K);
    for (int k = 0; k < K; ++k) z(k) = normal(rng);
    out.row(d) =
        llt.matrixU().solve(z).transpose();  // U = L^T, so this is L^{-T} z
  }
  return out;
}

}  // namespace

GroundTruth generate_from_model(const PriorConfig& prior, int n_nodes,
                                int n_cascades, double window,
                                std::uint64_t seed, double pi_density) {
  if (n_nodes < 1 || n_cascades < 1)
    throw ConfigError("generate_from_model needs N, M >= 1");
  if (!(pi_density >= 0.0 && pi_density <= 1.0))
    throw ConfigError("pi_density must lie in [0,1]");
  prior.validate(n_nodes, n_cascades);

  const int N = n_nodes;
  const int M = n_cascades;
  const int D = prior.D;

  LatentState state;
  state.Y = sample_rows_from_precision(prior.inv_W_Y, D, seed, stream::kInitY);
  state.X = sample_rows_from_precision(prior.inv_W_X, D, seed, stream::kInitX);
  state.U = sample_rows_from_precision(prior.inv_W_U, D, seed, stream::kInitU);

  Rng rng = substream(seed, stream::kGenerate);
  std::gamma_distribution<double> g1(prior.alpha1, 1.0);
  std::gamma_distribution<double> g2(prior.alpha2, 1.0);
  const double a = g1(rng);
  const double b = g2(rng);
  if (!(a + b > 0.0)) throw NumericError("degenerate Beta draw for mu_xi");
  state.mu_xi = a / (a + b);
  // Keep the Bernoulli parameter usable downstream.
  state.mu_xi = std::min(std::max(state.mu_xi, 1e-12), 1.0 - 1e-12);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd_R = std::sqrt(prior.sigma2_R);
  const double sd_C = std::sqrt(prior.sigma2_C);

  state.Xi = IntMatrix::Zero(N, N);
  state.R = Matrix::Zero(N, N);
  state.Lambda = Matrix::Constant(N, N, 0.25);
  IntMatrix G = IntMatrix::Zero(N, N);
  const Matrix XtU = state.X.transpose() * state.U;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      state.Xi(i, j) = unif(rng) < state.mu_xi ? 1 : 0;
      state.R(i, j) = XtU(i, j) + sd_R * normal(rng);
      if (i != j && state.Xi(i, j) == 1)
        G(i, j) = unif(rng) < logistic(state.R(i, j)) ? 1 : 0;
    }

  CascadeSet cascades = CascadeSet::empty(N, M, window);
  cascades.source_anchored = false;  // raw model draws, no window shift
  const Matrix XtY = state.X.transpose() * state.Y;
  for (int i = 0; i < N; ++i)
    for (int r = 0; r < M; ++r)
      if (unif(rng) < pi_density)
        cascades.set(i, r, XtY(i, r) + sd_C * normal(rng));

  GroundTruth gt;
  gt.network = ObservedNetwork::from_adjacency(std::move(G));
  gt.cascades = std::move(cascades);
  gt.latent = std::move(state);
  return gt;
}

}  // namespace diffstru
