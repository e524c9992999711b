#include "diffstru/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diffstru::metrics {

SreResult sre(const std::vector<double>& truth,
              const std::vector<double>& estimate) {
  if (truth.size() != estimate.size())
    throw DataError("SRE inputs sized " + std::to_string(truth.size()) +
                    " and " + std::to_string(estimate.size()));
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < truth.size(); ++i) {
    num += truth[i] * truth[i];
    const double e = estimate[i] - truth[i];
    den += e * e;
  }
  if (den == 0.0)
    return {std::numeric_limits<double>::infinity(), true};
  return {num / den, false};
}

double auc(const std::vector<ScoredCell>& cells) {
  long long n_pos = 0, n_neg = 0;
  for (const auto& c : cells) (c.truth ? n_pos : n_neg)++;
  if (n_pos == 0) throw DataError("AUC undefined: no positive cells");
  if (n_neg == 0) throw DataError("AUC undefined: no negative cells");

  // Tie-aware rank sum; equals the pairwise definition exactly.
  std::vector<const ScoredCell*> sorted;
  sorted.reserve(cells.size());
  for (const auto& c : cells) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredCell* a, const ScoredCell* b) {
              return a->score < b->score;
            });
  double pos_rank_sum = 0.0;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j < sorted.size() && sorted[j]->score == sorted[i]->score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (size_t k = i; k < j; ++k)
      if (sorted[k]->truth) pos_rank_sum += avg_rank;
    i = j;
  }
  const double u = pos_rank_sum -
                   0.5 * static_cast<double>(n_pos) * (n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

PrfResult precision_recall_f(const Confusion& c) {
  PrfResult out;
  if (c.tp + c.fp == 0) {
    out.no_predicted_positives = true;
    out.precision = 0.0;
  } else {
    out.precision = static_cast<double>(c.tp) / (c.tp + c.fp);
  }
  out.recall = c.tp + c.fn == 0
                   ? 0.0
                   : static_cast<double>(c.tp) / (c.tp + c.fn);
  const double pr = out.precision + out.recall;
  out.f_measure = pr == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / pr;
  return out;
}

double accuracy(const Confusion& c) {
  const long long total = c.tp + c.fp + c.tn + c.fn;
  return total == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / total;
}

double mcc(const Confusion& c) {
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn);
  const double fn = static_cast<double>(c.fn);
  const double den =
      std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  if (den == 0.0) return 0.0;
  return (tp * tn - fp * fn) / den;
}

Confusion confusion(const std::vector<std::pair<int, int>>& truth_pred) {
  Confusion c;
  for (const auto& [truth, pred] : truth_pred) {
    if (truth && pred) ++c.tp;
    else if (!truth && pred) ++c.fp;
    else if (truth && !pred) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double map_at_k(const std::vector<int>& ranks, int k) {
  if (ranks.empty()) return 0.0;
  double sum = 0.0;
  for (int r : ranks) {
    if (r < 1) throw DataError("ranks must be >= 1");
    if (r <= k) sum += 1.0 / r;
  }
  return sum / static_cast<double>(ranks.size());
}

RmseResult rmse(const std::vector<std::pair<double, double>>& truth_pred) {
  if (truth_pred.empty()) return {0.0, 0, true};
  double sum = 0.0;
  for (const auto& [t, p] : truth_pred) sum += (p - t) * (p - t);
  return {std::sqrt(sum / truth_pred.size()),
          static_cast<long long>(truth_pred.size()), false};
}

std::vector<PrPoint> pr_sweep(const std::vector<ScoredCell>& cells) {
  std::vector<ScoredCell> sorted = cells;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredCell& a, const ScoredCell& b) {
              return a.score > b.score;
            });
  long long total_pos = 0;
  for (const auto& c : sorted) total_pos += c.truth;
  std::vector<PrPoint> out;
  long long tp = 0, predicted = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) ++j;
    for (size_t k = i; k < j; ++k) {
      ++predicted;
      tp += sorted[k].truth;
    }
    // Predict positive at score >= this threshold.
    PrPoint pt;
    pt.threshold = sorted[i].score;
    pt.precision = static_cast<double>(tp) / predicted;
    pt.recall = total_pos == 0 ? 0.0 : static_cast<double>(tp) / total_pos;
    out.push_back(pt);
    i = j;
  }
  return out;
}

std::optional<BestF> best_f_point(const std::vector<ScoredCell>& cells) {
  const auto sweep = pr_sweep(cells);
  std::optional<BestF> best;
  for (const auto& pt : sweep) {
    const double pr = pt.precision + pt.recall;
    const double f = pr == 0.0 ? 0.0 : 2.0 * pt.precision * pt.recall / pr;
    if (!best || f > best->f_measure)
      best = BestF{pt.threshold, f, pt.precision, pt.recall};
  }
  return best;
}

}  // namespace diffstru::metrics
