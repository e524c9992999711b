#include "diffstru/baselines.hpp"

#include <cmath>

namespace diffstru {

LinkScores score_links(const ObservedNetwork& network, LinkScorer method) {
  network.validate();
  const int n = network.n_nodes;
  std::vector<std::vector<int>> nb(n);
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && (network.adjacency(i, j) || network.adjacency(j, i)))
        nb[i].push_back(j);
  for (int i = 0; i < n; ++i) degree[i] = static_cast<int>(nb[i].size());

  LinkScores out;
  out.scores = Matrix::Zero(n, n);
  std::vector<char> in_nb(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int z : nb[i]) in_nb[z] = 1;
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int z : nb[j]) {
        if (!in_nb[z]) continue;
        switch (method) {
          case LinkScorer::CommonNeighbors:
            s += 1.0;
            break;
          case LinkScorer::AdamicAdar:
            if (degree[z] <= 1)
              out.aa_degree_one_skipped = true;
            else
              s += 1.0 / std::log(static_cast<double>(degree[z]));
            break;
          case LinkScorer::ResourceAllocation:
            if (degree[z] > 0) s += 1.0 / degree[z];
            break;
        }
      }
      out.scores(i, j) = s;
      out.scores(j, i) = s;
    }
    for (int z : nb[i]) in_nb[z] = 0;
  }
  return out;
}

double regress_time(const std::vector<double>& sorted_times, int degree,
                    int left_index, int right_index) {
  if (degree != 1 && degree != 2)
    throw ConfigError("regression degree must be 1 or 2");
  const int n = static_cast<int>(sorted_times.size());
  if (n < degree + 1)
    throw DataError("underdetermined fit: " + std::to_string(n) +
                    " points for degree " + std::to_string(degree));
  if (left_index < 0 || right_index >= n || left_index > right_index)
    throw DataError("flanking indices [" + std::to_string(left_index) + ", " +
                    std::to_string(right_index) + "] out of order or range");
  Matrix V(n, degree + 1);
  Vector t(n);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      V(i, d) = p;
      p *= static_cast<double>(i);
    }
    t(i) = sorted_times[i];
  }
  const Vector coef =
      (V.transpose() * V).ldlt().solve(V.transpose() * t);
  const double x = 0.5 * (left_index + right_index);
  double value = 0.0;
  double p = 1.0;
  for (int d = 0; d <= degree; ++d) {
    value += coef(d) * p;
    p *= x;
  }
  return value;
}

}  // namespace diffstru
