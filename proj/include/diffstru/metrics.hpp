#pragma once

#include <optional>
#include <vector>

#include "diffstru/common.hpp"

namespace diffstru::metrics {

struct SreResult {
  double value = 0.0;
  bool exact_recovery = false;  // value is the +inf sentinel
};

// ||Z||^2 / ||Z_hat - Z||^2 over the given cells.
SreResult sre(const std::vector<double>& truth,
              const std::vector<double>& estimate);

struct ScoredCell {
  double score = 0.0;
  int truth = 0;  // 0/1
};

// Probability a random positive outranks a random negative, ties 0.5.
// Throws DataError naming the degenerate class when one is empty.
double auc(const std::vector<ScoredCell>& cells);

struct Confusion {
  long long tp = 0, fp = 0, tn = 0, fn = 0;
};

struct PrfResult {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  bool no_predicted_positives = false;
};

PrfResult precision_recall_f(const Confusion& c);
double accuracy(const Confusion& c);
double mcc(const Confusion& c);

// Confusion counts over evaluation cells (truth/predicted both 0/1).
Confusion confusion(const std::vector<std::pair<int, int>>& truth_pred);

// Mean over samples of 1/rank for ranks <= K, else 0.
double map_at_k(const std::vector<int>& ranks, int k);

struct RmseResult {
  double value = 0.0;
  long long count = 0;
  bool skipped = false;  // empty partition
};

RmseResult rmse(const std::vector<std::pair<double, double>>& truth_pred);

// (threshold, precision, recall) sweep rows for a PR curve over scored
// evaluation cells, one row per distinct score threshold.
struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};
std::vector<PrPoint> pr_sweep(const std::vector<ScoredCell>& cells);

// Best-F operating point over the sweep.
struct BestF {
  double threshold = 0.0;
  double f_measure = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};
std::optional<BestF> best_f_point(const std::vector<ScoredCell>& cells);

}  // namespace diffstru::metrics
