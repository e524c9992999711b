#pragma once

#include <cstdint>
#include <vector>

#include "diffstru/types.hpp"

namespace diffstru {

struct CascadeSimConfig {
  double transmission_rate = 1.0;  // exponential delay rate
  double window = 10.0;            // T_obs
  int n_cascades = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class MissingMode { Random, NonRandom };
enum class MissingTarget { Links, Activities, Both };

struct MissingnessSpec {
  MissingMode mode = MissingMode::Random;
  MissingTarget target = MissingTarget::Both;
  double rate = 0.0;       // theta
  int degree_floor = 5;    // non-random: source outdegree threshold
  int activity_floor = 5;  // non-random: participation threshold
  std::vector<int> private_users;  // whole activity rows removed

  void validate() const;
};

struct MaskedData {
  ObservedNetwork network;
  CascadeSet cascades;
  std::vector<std::pair<int, int>> removed_links;
  std::vector<std::pair<int, int>> removed_activities;  // (node, cascade)
};

// Independent-cascade simulation: per cascade a uniform random source at
// t = 0; infection flows against follow edges (an edge i -> j means i
// monitors j, so j's infection can reach i) with exponential delays; each
// node keeps its earliest arrival inside the window.
CascadeSet simulate_cascades(const ObservedNetwork& graph,
                             const CascadeSimConfig& cfg);

// Removal of links/activities per spec; ground truth stays untouched in the
// caller's hands, returned objects carry masks consistent with the removals.
MaskedData apply_missingness(const ObservedNetwork& network,
                             const CascadeSet& cascades,
                             const MissingnessSpec& spec, std::uint64_t seed);

struct PlantedPartition {
  ObservedNetwork graph;  // fully observed
  std::vector<int> labels;
};

PlantedPartition planted_partition_graph(int n_nodes, int n_communities,
                                         double p_in, double p_out,
                                         std::uint64_t seed);

}  // namespace diffstru
