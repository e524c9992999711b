#include "diffstru/synth.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "diffstru/rng.hpp"

namespace diffstru {

void CascadeSimConfig::validate() const {
  if (transmission_rate <= 0.0)
    throw ConfigError("transmission rate must be positive");
  if (window <= 0.0) throw ConfigError("window must be positive");
  if (n_cascades <= 0) throw ConfigError("n_cascades must be positive");
}

void MissingnessSpec::validate() const {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw ConfigError("removal rate theta must lie in [0,1]");
  if (degree_floor < 0 || activity_floor < 0)
    throw ConfigError("floors must be non-negative");
}

CascadeSet simulate_cascades(const ObservedNetwork& graph,
                             const CascadeSimConfig& cfg) {
  graph.validate();
  cfg.validate();
  const int N = graph.n_nodes;
  if (N == 0) throw DataError("cannot simulate cascades on an empty graph");

  // followers[v] = nodes w with edge w -> v; v's infection can reach them.
  std::vector<std::vector<int>> followers(N);
  for (int w = 0; w < N; ++w)
    for (int v = 0; v < N; ++v)
      if (graph.adjacency(w, v)) followers[v].push_back(w);

  CascadeSet out = CascadeSet::empty(N, cfg.n_cascades, cfg.window);
  for (int c = 0; c < cfg.n_cascades; ++c) {
    Rng rng = substream(cfg.seed, stream::kCascade, static_cast<std::uint64_t>(c));
    std::uniform_int_distribution<int> pick(0, N - 1);
    std::exponential_distribution<double> delay(cfg.transmission_rate);
    const int source = pick(rng);
    // Earliest-arrival propagation; each node infected at most once.
    std::vector<double> hit(N, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    hit[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      const auto [t, v] = queue.top();
      queue.pop();
      if (t > hit[v]) continue;  // stale entry
      for (int w : followers[v]) {
        const double tw = t + delay(rng);
        if (tw < hit[w] && tw <= cfg.window) {
          hit[w] = tw;
          queue.emplace(tw, w);
        }
      }
    }
    for (int v = 0; v < N; ++v)
      if (hit[v] <= cfg.window) out.set(v, c, hit[v]);
  }
  return out;
}

MaskedData apply_missingness(const ObservedNetwork& network,
                             const CascadeSet& cascades,
                             const MissingnessSpec& spec, std::uint64_t seed) {
  network.validate();
  cascades.validate();
  spec.validate();
  const int N = network.n_nodes;
  const int M = cascades.n_cascades;

  MaskedData out;
  out.network = network;
  out.cascades = cascades;
  Rng rng = substream(seed, stream::kMissing);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const bool do_links = spec.target == MissingTarget::Links ||
                        spec.target == MissingTarget::Both;
  const bool do_acts = spec.target == MissingTarget::Activities ||
                       spec.target == MissingTarget::Both;

  if (do_links) {
    std::vector<int> outdegree(N, 0);
    for (int i = 0; i < N; ++i) outdegree[i] = network.adjacency.row(i).sum();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (network.adjacency(i, j) != 1) continue;
        const bool candidate = spec.mode == MissingMode::Random ||
                               outdegree[i] > spec.degree_floor;
        if (candidate && unif(rng) < spec.rate) {
          out.network.adjacency(i, j) = 0;
          out.network.mask(i, j) = 0;
          out.removed_links.emplace_back(i, j);
        }
      }
  }

  if (do_acts) {
    std::vector<int> participations(N, 0);
    for (int i = 0; i < N; ++i) participations[i] = cascades.observed.row(i).sum();
    for (int i = 0; i < N; ++i)
      for (int c = 0; c < M; ++c) {
        if (!cascades.is_observed(i, c)) continue;
        const bool candidate = spec.mode == MissingMode::Random ||
                               participations[i] > spec.activity_floor;
        if (candidate && unif(rng) < spec.rate) {
          out.cascades.clear(i, c);
          out.removed_activities.emplace_back(i, c);
        }
      }
  }

  for (int user : spec.private_users) {
    if (user < 0 || user >= N)
      throw ConfigError("private user id " + std::to_string(user) +
                        " out of range");
    for (int c = 0; c < M; ++c)
      if (out.cascades.is_observed(user, c)) {
        out.cascades.clear(user, c);
        out.removed_activities.emplace_back(user, c);
      }
  }
  return out;
}

PlantedPartition planted_partition_graph(int n_nodes, int n_communities,
                                         double p_in, double p_out,
                                         std::uint64_t seed) {
  if (n_nodes <= 0 || n_communities <= 0 || n_communities > n_nodes)
    throw ConfigError("invalid node/community counts");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0) &&
      !(p_in == 0.0 && p_out == 0.0))
    throw ConfigError("probabilities must satisfy 0 <= p_out < p_in <= 1");

  PlantedPartition out;
  out.labels.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) out.labels[i] = i % n_communities;

  IntMatrix adj = IntMatrix::Zero(n_nodes, n_nodes);
  Rng rng = substream(seed, stream::kGraph);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 0; j < n_nodes; ++j) {
      if (i == j) continue;
      const double p = out.labels[i] == out.labels[j] ? p_in : p_out;
      if (unif(rng) < p) adj(i, j) = 1;
    }
  out.graph = ObservedNetwork::from_adjacency(std::move(adj));
  return out;
}

}  // namespace diffstru
