// diffstru: joint recovery of hidden links and hidden activations from a
// partially observed social graph and diffusion cascades.
//
// Subcommands: generate, infer, predict, evaluate, embed-export.
// Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diffstru/baselines.hpp"
#include "diffstru/io.hpp"
#include "diffstru/metrics.hpp"
#include "diffstru/predictor.hpp"
#include "diffstru/priors.hpp"
#include "diffstru/rng.hpp"
#include "diffstru/sampler.hpp"
#include "diffstru/synth.hpp"

namespace fs = std::filesystem;
using namespace diffstru;

namespace {

constexpr const char* kVersion = "diffstru 1.0.0";

// ---------------------------------------------------------------------------
// Flat key=value configuration with a declared key set. Keys prefixed "log."
// are provenance entries written into manifests; the loader skips them so a
// manifest doubles as a replayable config file.
class FlatConfig {
 public:
  explicit FlatConfig(std::vector<std::string> valid_keys)
      : valid_(std::move(valid_keys)) {}

  void load_file(const fs::path& path) {
    const io::Manifest entries = io::read_manifest(path);
    for (const auto& [key, value] : entries) {
      if (key.rfind("log.", 0) == 0) continue;
      set(key, value);
    }
  }

  void set(const std::string& key, const std::string& value) {
    if (std::find(valid_.begin(), valid_.end(), key) == valid_.end()) {
      std::string msg = "unknown config key '" + key + "'; valid keys:";
      for (const auto& k : valid_) msg += " " + k;
      throw ConfigError(msg);
    }
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not a number: '" +
                        it->second + "'");
    }
  }

  long long get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' is not an integer: '" +
                        it->second + "'");
    }
  }

  // Ordered (key, value) view of everything that was set.
  io::Manifest entries() const {
    io::Manifest out;
    for (const auto& k : valid_)
      if (values_.count(k)) out.push_back({k, values_.at(k)});
    return out;
  }

 private:
  std::vector<std::string> valid_;
  std::map<std::string, std::string> values_;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

void require_fresh_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory " + dir.string() + ": " +
                      ec.message());
}

// ---------------------------------------------------------------------------
// Dataset directory access.

struct Dataset {
  int n_nodes = 0;
  int n_cascades = 0;
  double window = 0.0;
  ObservedNetwork network;   // training view
  CascadeSet cascades;       // training view
  std::vector<int> labels;
  io::Manifest manifest;
  // Ground truth, present for synthetic data.
  std::optional<IntMatrix> truth_adjacency;
  std::optional<CascadeSet> truth_cascades;
};

Dataset load_dataset(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.txt"))
    throw DataError("no manifest.txt in dataset directory " + dir.string());
  Dataset ds;
  ds.manifest = io::read_manifest(dir / "manifest.txt");
  ds.n_nodes = std::stoi(io::manifest_get(ds.manifest, "n_nodes"));
  ds.n_cascades = std::stoi(io::manifest_get(ds.manifest, "n_cascades"));
  ds.window = std::stod(io::manifest_get(ds.manifest, "window"));
  const IntMatrix adj = io::read_edge_list(dir / "graph.tsv", ds.n_nodes);
  ds.network = ObservedNetwork::from_adjacency(adj);
  ds.cascades = io::read_cascades(dir / "cascades.tsv", ds.n_nodes,
                                  ds.n_cascades, ds.window);
  if (fs::exists(dir / "labels.tsv")) {
    std::ifstream in(dir / "labels.tsv");
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) ds.labels.push_back(std::stoi(line));
  }
  if (fs::exists(dir / "truth_graph.tsv"))
    ds.truth_adjacency = io::read_edge_list(dir / "truth_graph.tsv", ds.n_nodes);
  if (fs::exists(dir / "truth_cascades.tsv"))
    ds.truth_cascades = io::read_cascades(dir / "truth_cascades.tsv",
                                          ds.n_nodes, ds.n_cascades, ds.window);
  return ds;
}

PosteriorEstimate load_estimate(const fs::path& dir) {
  PosteriorEstimate est;
  for (const char* f : {"X_bar.tsv", "Y_bar.tsv", "U_bar.tsv", "Xi_bar.tsv"})
    if (!fs::exists(dir / f))
      throw DataError("estimate directory " + dir.string() + " is missing " +
                      f);
  est.X_bar = io::read_matrix(dir / "X_bar.tsv");
  est.Y_bar = io::read_matrix(dir / "Y_bar.tsv");
  est.U_bar = io::read_matrix(dir / "U_bar.tsv");
  est.Xi_bar = io::read_matrix(dir / "Xi_bar.tsv");
  est.n_retained = 1;
  return est;
}

io::Manifest base_manifest(const std::string& command) {
  return {{"log.tool", kVersion}, {"log.command", command}};
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(const std::string& config_path, const std::string& out,
                 std::optional<std::uint64_t> seed_flag,
                 const std::vector<std::string>& overrides) {
  FlatConfig cfg({"n_nodes", "n_cascades", "n_communities", "p_in", "p_out",
                  "transmission_rate", "window", "seed", "missing_mode",
                  "missing_target", "missing_rate", "degree_floor",
                  "activity_floor", "private_users"});
  if (!config_path.empty()) cfg.load_file(config_path);
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + ov + "' is not key=value");
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (seed_flag) cfg.set("seed", std::to_string(*seed_flag));

  const int n = static_cast<int>(cfg.get_int("n_nodes", 20));
  const int m = static_cast<int>(cfg.get_int("n_cascades", 10));
  const int communities = static_cast<int>(cfg.get_int("n_communities", 2));
  const double p_in = cfg.get_double("p_in", 0.2);
  const double p_out = cfg.get_double("p_out", 0.02);
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));

  CascadeSimConfig sim;
  sim.transmission_rate = cfg.get_double("transmission_rate", 1.0);
  sim.window = cfg.get_double("window", 10.0);
  sim.n_cascades = m;
  sim.seed = mix_seed(seed, stream::kCascade);
  sim.validate();

  MissingnessSpec spec;
  const std::string mode = cfg.get("missing_mode", "random");
  if (mode == "random")
    spec.mode = MissingMode::Random;
  else if (mode == "nonrandom")
    spec.mode = MissingMode::NonRandom;
  else
    throw ConfigError("missing_mode must be random or nonrandom, got '" +
                      mode + "'");
  const std::string target = cfg.get("missing_target", "both");
  if (target == "links")
    spec.target = MissingTarget::Links;
  else if (target == "activities")
    spec.target = MissingTarget::Activities;
  else if (target == "both")
    spec.target = MissingTarget::Both;
  else
    throw ConfigError("missing_target must be links, activities or both");
  spec.rate = cfg.get_double("missing_rate", 0.0);
  spec.degree_floor = static_cast<int>(cfg.get_int("degree_floor", 5));
  spec.activity_floor = static_cast<int>(cfg.get_int("activity_floor", 5));
  spec.private_users = parse_int_list(cfg.get("private_users", ""));
  spec.validate();

  const PlantedPartition pp =
      planted_partition_graph(n, communities, p_in, p_out,
                              mix_seed(seed, stream::kGraph));
  const CascadeSet truth_cascades = simulate_cascades(pp.graph, sim);
  const MaskedData masked = apply_missingness(pp.graph, truth_cascades, spec,
                                              mix_seed(seed, stream::kMissing));
  const bool anything_removed =
      !masked.removed_links.empty() || !masked.removed_activities.empty();

  const fs::path dir(out);
  require_fresh_dir(dir);
  io::write_edge_list(dir / "graph.tsv", masked.network.adjacency);
  io::write_cascades(dir / "cascades.tsv", masked.cascades);
  {
    std::ofstream labels(dir / "labels.tsv", std::ios::binary);
    for (int v = 0; v < n; ++v) labels << pp.labels[v] << "\n";
  }
  if (anything_removed) {
    io::write_edge_list(dir / "truth_graph.tsv", pp.graph.adjacency);
    io::write_cascades(dir / "truth_cascades.tsv", truth_cascades);
  }

  io::Manifest manifest = base_manifest("generate");
  // Record the resolved config (defaults included) so the manifest replays.
  manifest.push_back({"n_nodes", std::to_string(n)});
  manifest.push_back({"n_cascades", std::to_string(m)});
  manifest.push_back({"n_communities", std::to_string(communities)});
  manifest.push_back({"p_in", io::format_double(p_in)});
  manifest.push_back({"p_out", io::format_double(p_out)});
  manifest.push_back({"transmission_rate",
                      io::format_double(sim.transmission_rate)});
  manifest.push_back({"window", io::format_double(sim.window)});
  manifest.push_back({"seed", std::to_string(seed)});
  manifest.push_back({"missing_mode", mode});
  manifest.push_back({"missing_target", target});
  manifest.push_back({"missing_rate", io::format_double(spec.rate)});
  manifest.push_back({"degree_floor", std::to_string(spec.degree_floor)});
  manifest.push_back({"activity_floor", std::to_string(spec.activity_floor)});
  manifest.push_back({"private_users", cfg.get("private_users", "")});
  for (const auto& [i, j] : masked.removed_links)
    manifest.push_back(
        {"log.removed_link", std::to_string(i) + "," + std::to_string(j)});
  for (const auto& [v, c] : masked.removed_activities)
    manifest.push_back(
        {"log.removed_activity", std::to_string(v) + "," + std::to_string(c)});
  io::write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// infer

struct InferFlags {
  int n_iter = 1000;
  int burn_in = 900;
  int thinning = 1;
  int dim = 8;
  double sigma2_c = 1.0;
  double sigma2_r = 1.0;
  double alpha1 = 0.2;
  double alpha2 = 0.3;
  double ridge = kDefaultRidge;
  std::string prior = "identity";
  bool derived_r_precision = false;
  bool dump_priors = false;
  int checkpoint_every = 0;
  std::string resume;
  int chains = 1;
};

PriorConfig build_prior(const Dataset& ds, const InferFlags& flags) {
  PriorConfig prior = PriorConfig::identity(ds.n_nodes, ds.n_cascades,
                                            flags.dim);
  prior.sigma2_C = flags.sigma2_c;
  prior.sigma2_R = flags.sigma2_r;
  prior.alpha1 = flags.alpha1;
  prior.alpha2 = flags.alpha2;
  if (flags.prior == "laplacian") {
    const SimilarityMatrix theta_nodes = node_similarity(ds.network);
    const SimilarityMatrix theta_cascades = cascade_similarity(ds.cascades);
    prior.inv_W_X = laplacian_prior(theta_nodes, flags.ridge);
    prior.inv_W_U = laplacian_prior(theta_nodes, flags.ridge);
    prior.inv_W_Y = laplacian_prior(theta_cascades, flags.ridge);
  } else if (flags.prior != "identity") {
    throw ConfigError("--prior must be identity or laplacian, got '" +
                      flags.prior + "'");
  }
  prior.validate(ds.n_nodes, ds.n_cascades);
  return prior;
}

void write_estimate(const fs::path& dir, const PosteriorEstimate& est) {
  io::write_matrix(dir / "X_bar.tsv", est.X_bar);
  io::write_matrix(dir / "Y_bar.tsv", est.Y_bar);
  io::write_matrix(dir / "U_bar.tsv", est.U_bar);
  io::write_matrix(dir / "Xi_bar.tsv", est.Xi_bar);
  io::write_trace(dir / "trace.tsv", est.trace);
}

int cmd_infer(const std::string& dataset_dir, const std::string& out,
              std::uint64_t seed, const InferFlags& flags) {
  const Dataset ds = load_dataset(dataset_dir);
  const PriorConfig prior = build_prior(ds, flags);

  SamplerConfig cfg;
  cfg.n_iter = flags.n_iter;
  cfg.burn_in = flags.burn_in;
  cfg.thinning = flags.thinning;
  cfg.derived_r_precision = flags.derived_r_precision;
  cfg.validate();
  if (flags.chains < 1) throw ConfigError("--chains must be >= 1");

  const fs::path dir(out);
  require_fresh_dir(dir);
  if (flags.dump_priors) {
    io::write_matrix(dir / "inv_W_X.tsv", prior.inv_W_X);
    io::write_matrix(dir / "inv_W_U.tsv", prior.inv_W_U);
    io::write_matrix(dir / "inv_W_Y.tsv", prior.inv_W_Y);
  }

  Checkpoint resumed;
  for (int chain = 0; chain < flags.chains; ++chain) {
    cfg.rng_seed = flags.chains == 1 ? seed : mix_seed(seed, 0xC0A1, chain);
    GibbsOptions opts;
    const fs::path chain_dir =
        flags.chains == 1 ? dir : dir / ("chain_" + std::to_string(chain));
    require_fresh_dir(chain_dir);
    if (flags.checkpoint_every > 0) {
      opts.checkpoint_every = flags.checkpoint_every;
      opts.on_checkpoint = [&](const Checkpoint& ck) {
        io::write_checkpoint(chain_dir / "checkpoint", ck);
      };
    }
    if (!flags.resume.empty()) {
      resumed = io::read_checkpoint(flags.resume);
      opts.resume_from = &resumed;
    }
    const PosteriorEstimate est =
        run_gibbs(ds.network, ds.cascades, prior, cfg, opts);
    write_estimate(chain_dir, est);
  }

  io::Manifest manifest = base_manifest("infer");
  manifest.push_back({"dataset", dataset_dir});
  manifest.push_back({"seed", std::to_string(seed)});
  manifest.push_back({"n_iter", std::to_string(cfg.n_iter)});
  manifest.push_back({"burn_in", std::to_string(cfg.burn_in)});
  manifest.push_back({"thinning", std::to_string(cfg.thinning)});
  manifest.push_back({"dim", std::to_string(flags.dim)});
  manifest.push_back({"sigma2_c", io::format_double(flags.sigma2_c)});
  manifest.push_back({"sigma2_r", io::format_double(flags.sigma2_r)});
  manifest.push_back({"alpha1", io::format_double(flags.alpha1)});
  manifest.push_back({"alpha2", io::format_double(flags.alpha2)});
  manifest.push_back({"prior", flags.prior});
  manifest.push_back({"ridge", io::format_double(flags.ridge)});
  manifest.push_back({"derived_r_precision",
                      flags.derived_r_precision ? "1" : "0"});
  manifest.push_back({"chains", std::to_string(flags.chains)});
  io::write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const std::string& dataset_dir, const std::string& estimate_dir,
                const std::string& out, double delta_g,
                std::optional<double> delta_c, bool row_normalized_p) {
  const Dataset ds = load_dataset(dataset_dir);
  const PosteriorEstimate est = load_estimate(estimate_dir);
  if (est.X_bar.cols() != ds.n_nodes)
    throw DataError("estimate X_bar has " + std::to_string(est.X_bar.cols()) +
                    " nodes but dataset graph.tsv has " +
                    std::to_string(ds.n_nodes));
  if (est.Y_bar.cols() != ds.n_cascades)
    throw DataError("estimate Y_bar has " + std::to_string(est.Y_bar.cols()) +
                    " cascades but dataset cascades.tsv has " +
                    std::to_string(ds.n_cascades));

  auto [g_hat, g_score] = predict_links(est, ds.network, delta_g);
  const Matrix A = infection_transfer(ds.cascades);
  const Matrix P = infection_probability(ds.cascades, A, row_normalized_p);
  const double dc = delta_c ? *delta_c : default_delta_C(P);
  auto [c_infected, c_times] = predict_cascades(est, ds.cascades, P, dc);

  const fs::path dir(out);
  require_fresh_dir(dir);
  io::write_matrix(dir / "G_hat.tsv", g_hat);
  io::write_matrix(dir / "G_score.tsv", g_score);
  io::write_matrix(dir / "C_hat_infected.tsv", c_infected);
  io::write_matrix(dir / "C_hat_times.tsv", c_times);
  io::write_matrix(dir / "P.tsv", P);
  io::write_matrix(dir / "A.tsv", A);

  io::Manifest manifest = base_manifest("predict");
  manifest.push_back({"dataset", dataset_dir});
  manifest.push_back({"estimate", estimate_dir});
  manifest.push_back({"delta_g", io::format_double(delta_g)});
  manifest.push_back({"delta_c", io::format_double(dc)});
  manifest.push_back({"delta_c_source", delta_c ? "flag" : "mean_of_P"});
  manifest.push_back({"row_normalized_p", row_normalized_p ? "1" : "0"});
  io::write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct HeldOutLinks {
  std::vector<metrics::ScoredCell> scored;           // score = model score
  std::vector<std::pair<int, int>> truth_pred;       // for confusion metrics
  std::vector<std::pair<int, int>> cells;            // (i, j)
};

HeldOutLinks held_out_links(const Dataset& ds, const Matrix& score,
                            const IntMatrix& g_hat) {
  if (!ds.truth_adjacency)
    throw DataError(
        "evaluation requires ground truth (truth_graph.tsv); only synthetic "
        "or replayable datasets carry it");
  HeldOutLinks out;
  for (int i = 0; i < ds.n_nodes; ++i)
    for (int j = 0; j < ds.n_nodes; ++j) {
      if (i == j) continue;
      if (ds.network.mask(i, j) == 1) continue;  // training-observed
      const int truth = (*ds.truth_adjacency)(i, j);
      out.scored.push_back({score(i, j), truth});
      out.truth_pred.push_back({truth, g_hat(i, j)});
      out.cells.push_back({i, j});
    }
  return out;
}

void append_link_rows(io::Manifest& report, const std::string& method,
                      const std::vector<metrics::ScoredCell>& scored,
                      const std::vector<std::pair<int, int>>& truth_pred) {
  const std::string p = "link." + method + ".";
  report.push_back({p + "auc", io::format_double(metrics::auc(scored))});
  const metrics::Confusion c = metrics::confusion(truth_pred);
  const metrics::PrfResult prf = metrics::precision_recall_f(c);
  report.push_back({p + "precision", io::format_double(prf.precision)});
  report.push_back({p + "recall", io::format_double(prf.recall)});
  report.push_back({p + "f_measure", io::format_double(prf.f_measure)});
  report.push_back({p + "accuracy",
                    io::format_double(metrics::accuracy(c))});
  report.push_back({p + "mcc", io::format_double(metrics::mcc(c))});
  const auto best = metrics::best_f_point(scored);
  if (best) {
    report.push_back({p + "best_f", io::format_double(best->f_measure)});
    report.push_back(
        {p + "best_f_threshold", io::format_double(best->threshold)});
  }
}

int cmd_evaluate(const std::string& dataset_dir,
                 const std::string& prediction_dir, const std::string& out,
                 bool with_baselines, int map_k) {
  const Dataset ds = load_dataset(dataset_dir);
  const fs::path pdir(prediction_dir);
  const Matrix g_score_real = io::read_matrix(pdir / "G_score.tsv");
  const Matrix g_hat_real = io::read_matrix(pdir / "G_hat.tsv");
  const IntMatrix g_hat = g_hat_real.cast<int>();

  const HeldOutLinks held = held_out_links(ds, g_score_real, g_hat);

  io::Manifest report;
  append_link_rows(report, "diffstru", held.scored, held.truth_pred);

  if (with_baselines) {
    const struct {
      const char* name;
      LinkScorer scorer;
    } methods[] = {{"cn", LinkScorer::CommonNeighbors},
                   {"aa", LinkScorer::AdamicAdar},
                   {"ra", LinkScorer::ResourceAllocation}};
    for (const auto& m : methods) {
      const Matrix s = score_links(ds.network, m.scorer).scores;
      std::vector<metrics::ScoredCell> scored;
      scored.reserve(held.cells.size());
      for (std::size_t k = 0; k < held.cells.size(); ++k) {
        const auto [i, j] = held.cells[k];
        scored.push_back({s(i, j), held.scored[k].truth});
      }
      // Threshold baselines at their best-F operating point.
      const auto best = metrics::best_f_point(scored);
      std::vector<std::pair<int, int>> tp;
      tp.reserve(scored.size());
      for (const auto& cell : scored)
        tp.push_back({cell.truth,
                      best && cell.score >= best->threshold ? 1 : 0});
      append_link_rows(report, m.name, scored, tp);
    }
  }

  // MAP@K over nodes that lost at least one outgoing link.
  {
    std::vector<int> ranks;
    for (int i = 0; i < ds.n_nodes; ++i) {
      std::vector<std::pair<double, int>> row;  // (score, truth)
      bool any_pos = false;
      for (int j = 0; j < ds.n_nodes; ++j) {
        if (i == j || ds.network.mask(i, j) == 1) continue;
        const int truth = (*ds.truth_adjacency)(i, j);
        any_pos = any_pos || truth == 1;
        row.push_back({g_score_real(i, j), truth});
      }
      if (!any_pos) continue;
      std::stable_sort(row.begin(), row.end(),
                       [](const auto& a, const auto& b) {
                         return a.first > b.first;
                       });
      for (std::size_t r = 0; r < row.size(); ++r)
        if (row[r].second == 1) {
          ranks.push_back(static_cast<int>(r + 1));
          break;  // rank of the best-ranked true link
        }
    }
    if (!ranks.empty())
      report.push_back(
          {"link.diffstru.map_at_" + std::to_string(map_k),
           io::format_double(metrics::map_at_k(ranks, map_k))});
  }

  // Cascade RMSE partitions on held-out activity cells.
  io::Manifest rmse_report;
  if (ds.truth_cascades && fs::exists(pdir / "C_hat_times.tsv")) {
    const Matrix c_times = io::read_matrix(pdir / "C_hat_times.tsv");
    const Matrix c_infected_real =
        io::read_matrix(pdir / "C_hat_infected.tsv");
    std::vector<std::pair<double, double>> infected, uninfected, all;
    for (int v = 0; v < ds.n_nodes; ++v)
      for (int c = 0; c < ds.n_cascades; ++c) {
        if (ds.cascades.is_observed(v, c)) continue;  // training-observed
        const bool truth_inf = ds.truth_cascades->is_observed(v, c);
        // Uninfected cells score as the window end on both sides.
        const double t_true =
            truth_inf ? ds.truth_cascades->times(v, c) : ds.window;
        const double t_pred =
            c_infected_real(v, c) > 0.5 ? c_times(v, c) : ds.window;
        (truth_inf ? infected : uninfected).push_back({t_true, t_pred});
        all.push_back({t_true, t_pred});
      }
    const auto add = [&](const char* name,
                         const std::vector<std::pair<double, double>>& part) {
      const metrics::RmseResult r = metrics::rmse(part);
      rmse_report.push_back(
          {std::string("rmse.") + name,
           r.skipped ? "skipped" : io::format_double(r.value)});
      rmse_report.push_back({std::string("rmse.") + name + ".count",
                             std::to_string(r.count)});
    };
    add("infected", infected);
    add("uninfected", uninfected);
    add("all", all);
  }

  const fs::path dir(out);
  require_fresh_dir(dir);
  io::write_manifest(dir / "report.tsv", report);
  if (!rmse_report.empty()) io::write_manifest(dir / "rmse.tsv", rmse_report);

  // PR-curve rows for the model scores.
  {
    std::ofstream pr(dir / "pr_curve.tsv", std::ios::binary);
    pr << "threshold\tprecision\trecall\n";
    for (const auto& pt : metrics::pr_sweep(held.scored))
      pr << io::format_double(pt.threshold) << "\t"
         << io::format_double(pt.precision) << "\t"
         << io::format_double(pt.recall) << "\n";
  }

  io::Manifest manifest = base_manifest("evaluate");
  manifest.push_back({"dataset", dataset_dir});
  manifest.push_back({"predictions", prediction_dir});
  manifest.push_back({"with_baselines", with_baselines ? "1" : "0"});
  manifest.push_back({"map_k", std::to_string(map_k)});
  io::write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// embed-export

int cmd_embed_export(const std::string& dataset_dir,
                     const std::string& estimate_dir, const std::string& out) {
  const Dataset ds = load_dataset(dataset_dir);
  const PosteriorEstimate est = load_estimate(estimate_dir);
  const fs::path dir(out);
  require_fresh_dir(dir);

  const auto dump = [&](const fs::path& path, const Matrix& emb,
                        bool with_labels) {
    std::ofstream f(path, std::ios::binary);
    f << "id\tlabel";
    for (int d = 0; d < emb.rows(); ++d) f << "\tdim" << d;
    f << "\n";
    for (int k = 0; k < emb.cols(); ++k) {
      const int label = with_labels && k < static_cast<int>(ds.labels.size())
                            ? ds.labels[k]
                            : -1;
      f << k << "\t" << label;
      for (int d = 0; d < emb.rows(); ++d)
        f << "\t" << io::format_double(emb(d, k));
      f << "\n";
    }
  };
  dump(dir / "node_embeddings_x.tsv", est.X_bar, true);
  dump(dir / "node_embeddings_u.tsv", est.U_bar, true);
  dump(dir / "cascade_embeddings_y.tsv", est.Y_bar, false);

  io::Manifest manifest = base_manifest("embed-export");
  manifest.push_back({"dataset", dataset_dir});
  manifest.push_back({"estimate", estimate_dir});
  io::write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diffstru: joint link and cascade recovery"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string out = "out";
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;

  // generate
  auto* gen = app.add_subcommand("generate", "synthesize a masked dataset");
  std::vector<std::string> gen_overrides;
  gen->add_option("--out", out, "output directory");
  gen->add_option("--config", config_path, "key=value config file");
  gen->add_option("--seed", seed, "master RNG seed")
      ->each([&](const std::string&) { seed_given = true; });
  gen->add_option("--set", gen_overrides, "config override key=value");

  // infer
  auto* inf = app.add_subcommand("infer", "run the Gibbs sampler");
  std::string dataset_dir;
  InferFlags iflags;
  inf->add_option("dataset", dataset_dir, "dataset directory")->required();
  inf->add_option("--out", out, "output directory");
  inf->add_option("--config", config_path, "key=value config file");
  auto* o_seed = inf->add_option("--seed", seed, "master RNG seed");
  auto* o_niter = inf->add_option("--n-iter", iflags.n_iter, "total sweeps");
  auto* o_burn = inf->add_option("--burn-in", iflags.burn_in,
                                 "discarded sweeps");
  auto* o_thin =
      inf->add_option("--thinning", iflags.thinning, "retain every k-th draw");
  auto* o_dim = inf->add_option("--dim", iflags.dim, "latent dimension D");
  auto* o_s2c =
      inf->add_option("--sigma2-c", iflags.sigma2_c, "cascade noise variance");
  auto* o_s2r = inf->add_option("--sigma2-r", iflags.sigma2_r,
                                "link-score noise variance");
  auto* o_a1 = inf->add_option("--alpha1", iflags.alpha1, "Beta prior alpha1");
  auto* o_a2 = inf->add_option("--alpha2", iflags.alpha2, "Beta prior alpha2");
  auto* o_prior = inf->add_option("--prior", iflags.prior,
                                  "identity|laplacian");
  auto* o_ridge = inf->add_option("--ridge", iflags.ridge, "Laplacian ridge");
  auto* o_drp =
      inf->add_flag("--derived-r-precision", iflags.derived_r_precision,
                    "use the derived R-update precision instead of the "
                    "printed unit variance");
  inf->add_flag("--dump-priors", iflags.dump_priors,
                "write the prior precision matrices");
  inf->add_option("--checkpoint-every", iflags.checkpoint_every,
                  "checkpoint period in sweeps");
  inf->add_option("--resume", iflags.resume, "checkpoint directory to resume");
  inf->add_option("--chains", iflags.chains, "independent chains");

  // predict
  auto* pred = app.add_subcommand("predict", "recover links and activations");
  std::string estimate_dir;
  double delta_g = kDefaultDeltaG;
  double delta_c_val = 0.0;
  bool row_normalized_p = false;
  pred->add_option("dataset", dataset_dir, "dataset directory")->required();
  pred->add_option("estimate", estimate_dir, "infer output directory")
      ->required();
  pred->add_option("--out", out, "output directory");
  pred->add_option("--seed", seed, "unused; accepted for interface symmetry");
  pred->add_option("--delta-g", delta_g, "link score threshold");
  auto* dc_opt =
      pred->add_option("--delta-c", delta_c_val,
                       "infection probability threshold (default: mean of P)");
  pred->add_flag("--row-normalized-p", row_normalized_p,
                 "use the row-normalized transposed P construction");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "score predictions");
  std::string prediction_dir;
  bool with_baselines = false;
  int map_k = 10;
  eval->add_option("dataset", dataset_dir, "dataset directory")->required();
  eval->add_option("predictions", prediction_dir, "predict output directory")
      ->required();
  eval->add_option("--out", out, "output directory");
  eval->add_option("--seed", seed, "unused; accepted for interface symmetry");
  eval->add_flag("--with-baselines", with_baselines,
                 "also score CN/AA/RA link baselines");
  eval->add_option("--map-k", map_k, "cutoff for MAP@K");

  // embed-export
  auto* emb = app.add_subcommand("embed-export", "dump latent embeddings");
  emb->add_option("dataset", dataset_dir, "dataset directory")->required();
  emb->add_option("estimate", estimate_dir, "infer output directory")
      ->required();
  emb->add_option("--out", out, "output directory");
  emb->add_option("--seed", seed, "unused; accepted for interface symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return cmd_generate(config_path, out,
                          seed_given ? std::optional<std::uint64_t>(seed)
                                     : std::nullopt,
                          gen_overrides);
    if (inf->parsed()) {
      if (!config_path.empty()) {
        // Config file supplies defaults; explicit flags win.
        FlatConfig c({"n_iter", "burn_in", "thinning", "dim", "sigma2_c",
                      "sigma2_r", "alpha1", "alpha2", "prior", "ridge",
                      "derived_r_precision", "chains", "checkpoint_every",
                      "seed", "dataset"});
        c.load_file(config_path);
        if (!o_niter->count())
          iflags.n_iter = static_cast<int>(c.get_int("n_iter", iflags.n_iter));
        if (!o_burn->count())
          iflags.burn_in =
              static_cast<int>(c.get_int("burn_in", iflags.burn_in));
        if (!o_thin->count())
          iflags.thinning =
              static_cast<int>(c.get_int("thinning", iflags.thinning));
        if (!o_dim->count())
          iflags.dim = static_cast<int>(c.get_int("dim", iflags.dim));
        if (!o_s2c->count())
          iflags.sigma2_c = c.get_double("sigma2_c", iflags.sigma2_c);
        if (!o_s2r->count())
          iflags.sigma2_r = c.get_double("sigma2_r", iflags.sigma2_r);
        if (!o_a1->count()) iflags.alpha1 = c.get_double("alpha1", iflags.alpha1);
        if (!o_a2->count()) iflags.alpha2 = c.get_double("alpha2", iflags.alpha2);
        if (!o_prior->count()) iflags.prior = c.get("prior", iflags.prior);
        if (!o_ridge->count()) iflags.ridge = c.get_double("ridge", iflags.ridge);
        if (!o_drp->count())
          iflags.derived_r_precision =
              c.get_int("derived_r_precision", iflags.derived_r_precision) != 0;
        if (!o_seed->count())
          seed = static_cast<std::uint64_t>(c.get_int("seed", seed));
      }
      return cmd_infer(dataset_dir, out, seed, iflags);
    }
    if (pred->parsed())
      return cmd_predict(dataset_dir, estimate_dir, out, delta_g,
                         dc_opt->count() > 0
                             ? std::optional<double>(delta_c_val)
                             : std::nullopt,
                         row_normalized_p);
    if (eval->parsed())
      return cmd_evaluate(dataset_dir, prediction_dir, out, with_baselines,
                          map_k);
    if (emb->parsed())
      return cmd_embed_export(dataset_dir, estimate_dir, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
