#include "diffstru/priors.hpp"

#include <random>
#include <set>

#include "diffstru/rng.hpp"

#include "doctest.h"

using namespace diffstru;

namespace {

// Brute-force common-neighbor count over the union neighborhoods.
Matrix brute_node_similarity(const IntMatrix& adj) {
  const int n = static_cast<int>(adj.rows());
  std::vector<std::set<int>> nbr(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj(i, j) == 1 || adj(j, i) == 1) nbr[i].insert(j);
  Matrix theta = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int z : nbr[i])
        if (nbr[j].count(z)) theta(i, j) += 1.0;
    }
  return theta;
}

}  // namespace

TEST_CASE("node similarity of empty graph is zero") {
  ObservedNetwork net = ObservedNetwork::from_adjacency(IntMatrix::Zero(5, 5));
  CHECK(node_similarity(net).values.isZero(0.0));
}

TEST_CASE("node similarity counts a single shared out-neighbor") {
  // a -> c, b -> c
  IntMatrix adj = IntMatrix::Zero(3, 3);
  adj(0, 2) = 1;
  adj(1, 2) = 1;
  const SimilarityMatrix theta = node_similarity(
      ObservedNetwork::from_adjacency(adj));
  CHECK(theta.values(0, 1) == doctest::Approx(1.0));
  CHECK(theta.values(1, 0) == doctest::Approx(1.0));
  CHECK(theta.values(0, 0) == 0.0);
}

TEST_CASE("node similarity equals brute-force intersection on random graph") {
  Rng rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  IntMatrix adj = IntMatrix::Zero(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      if (i != j && unif(rng) < 0.3) adj(i, j) = 1;
  const SimilarityMatrix theta =
      node_similarity(ObservedNetwork::from_adjacency(adj));
  CHECK(theta.values == brute_node_similarity(adj));
}

TEST_CASE("cascade similarity handles disjoint and identical cascades") {
  CascadeSet disjoint = CascadeSet::empty(4, 2, 1.0);
  disjoint.set(0, 0, 0.1);
  disjoint.set(1, 1, 0.2);
  CHECK(cascade_similarity(disjoint).values.isZero(0.0));

  CascadeSet same = CascadeSet::empty(4, 2, 1.0);
  for (int c = 0; c < 2; ++c)
    for (int v = 0; v < 3; ++v) same.set(v, c, 0.1 * (v + 1));
  const SimilarityMatrix theta = cascade_similarity(same);
  CHECK(theta.values(0, 1) == doctest::Approx(3.0));
  CHECK(theta.values(0, 0) == 0.0);
}

TEST_CASE("cascade similarity equals brute-force intersection") {
  Rng rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CascadeSet cs = CascadeSet::empty(9, 20, 1.0);
  for (int v = 0; v < 9; ++v)
    for (int c = 0; c < 20; ++c)
      if (unif(rng) < 0.4) cs.set(v, c, unif(rng));
  const SimilarityMatrix theta = cascade_similarity(cs);
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 20; ++b) {
      if (a == b) {
        CHECK(theta.values(a, b) == 0.0);
        continue;
      }
      int shared = 0;
      for (int v = 0; v < 9; ++v)
        if (cs.is_observed(v, a) && cs.is_observed(v, b)) ++shared;
      CHECK(theta.values(a, b) == doctest::Approx(shared));
    }
}

TEST_CASE("laplacian prior limits") {
  SimilarityMatrix zero;
  zero.dim = 4;
  zero.values = Matrix::Zero(4, 4);
  CHECK(laplacian_prior(zero, 1.0).isApprox(Matrix::Identity(4, 4)));

  Rng rng(23);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  SimilarityMatrix theta;
  theta.dim = 5;
  theta.values = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      theta.values(i, j) = theta.values(j, i) = unif(rng);
  const Matrix lap = laplacian_prior(theta, 0.0);
  CHECK(lap.rowwise().sum().isZero(1e-12));
}

TEST_CASE("ridge controls smallest eigenvalue") {
  Rng rng(29);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SimilarityMatrix theta;
  theta.dim = 5;
  theta.values = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      theta.values(i, j) = theta.values(j, i) = unif(rng);
  const Matrix lap = laplacian_prior(theta, 1e-3);
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  CHECK(es.eigenvalues().minCoeff() >= 1e-3 - 1e-9);
}

TEST_CASE("laplacian quadratic form identity") {
  Rng rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  SimilarityMatrix theta;
  theta.dim = 7;
  theta.values = Matrix::Zero(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      theta.values(i, j) = theta.values(j, i) = unif(rng);
  const double ridge = 0.05;
  const Matrix lap = laplacian_prior(theta, ridge);
  for (int rep = 0; rep < 10; ++rep) {
    Vector x(7);
    for (int i = 0; i < 7; ++i) x(i) = normal(rng);
    double pairwise = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        pairwise += theta.values(i, j) * (x(i) - x(j)) * (x(i) - x(j));
    const double expected = 0.5 * pairwise + ridge * x.squaredNorm();
    CHECK(x.dot(lap * x) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("similarity validation rejects asymmetry") {
  SimilarityMatrix bad;
  bad.dim = 2;
  bad.values = Matrix::Zero(2, 2);
  bad.values(0, 1) = 1.0;
  CHECK_THROWS_AS(bad.validate(), DataError);
}
