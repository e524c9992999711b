#pragma once

#include <vector>

#include "diffstru/types.hpp"

namespace diffstru {

enum class LinkScorer { CommonNeighbors, AdamicAdar, ResourceAllocation };

// Classical similarity scores over the undirected-union neighborhoods of the
// observed graph. Degree-1 common neighbors contribute 0 under Adamic-Adar
// (log 1 = 0 would blow up); the flag reports whether any were skipped.
struct LinkScores {
  Matrix scores;  // N x N, symmetric, zero diagonal
  bool aa_degree_one_skipped = false;
};
LinkScores score_links(const ObservedNetwork& network, LinkScorer method);

// Least-squares polynomial fit of time against index over a sorted observed
// cascade sequence, evaluated at the mean of two flanking indices.
double regress_time(const std::vector<double>& sorted_times, int degree,
                    int left_index, int right_index);

}  // namespace diffstru
