#include "hypercmp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hypercmp {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double a12(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.empty() || ys.empty())
    throw std::invalid_argument("a12: empty sample");

  // midranks over the pooled sample; A12 follows from the rank sum of xs
  std::vector<std::pair<double, int>> pooled;  // (value, 0 = xs / 1 = ys)
  pooled.reserve(xs.size() + ys.size());
  for (double v : xs) pooled.emplace_back(v, 0);
  for (double v : ys) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_x = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
    double midrank = (static_cast<double>(i) + j + 1) / 2.0;  // 1-based
    for (std::size_t t = i; t < j; ++t)
      if (pooled[t].second == 0) rank_sum_x += midrank;
    i = j;
  }
  double n = static_cast<double>(xs.size());
  double m = static_cast<double>(ys.size());
  return (rank_sum_x - n * (n + 1) / 2.0) / (n * m);
}

bool bootstrap_significant(const std::vector<double>& xs,
                           const std::vector<double>& ys, int resamples,
                           double confidence, Rng& rng) {
  if (resamples < 1 || confidence <= 0.0 || confidence >= 1.0)
    throw std::invalid_argument("bootstrap_significant: bad arguments");
  double observed = std::abs(mean_of(xs) - mean_of(ys));

  std::vector<double> pool(xs);
  pool.insert(pool.end(), ys.begin(), ys.end());

  int at_least = 0;
  for (int r = 0; r < resamples; ++r) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      sx += pool[rng.index(pool.size())];
    for (std::size_t i = 0; i < ys.size(); ++i)
      sy += pool[rng.index(pool.size())];
    double diff = std::abs(sx / xs.size() - sy / ys.size());
    if (diff >= observed) ++at_least;
  }
  return static_cast<double>(at_least) / resamples < 1.0 - confidence;
}

namespace {

struct Group {
  std::vector<const TreatmentSamples*> members;  // sorted by mean descending
  std::vector<double> pooled;

  double pooled_mean() const { return mean_of(pooled); }
};

std::vector<double> pool_values(
    const std::vector<const TreatmentSamples*>& members) {
  std::vector<double> out;
  for (const auto* t : members)
    out.insert(out.end(), t->values.begin(), t->values.end());
  return out;
}

/// Max between-group sum of squared mean deviations over all cuts of
/// treatments given as (mean, size) pairs, sorted by mean descending.
double best_cut_delta(std::vector<std::pair<double, double>> stats,
                      std::size_t* cut_out = nullptr) {
  std::sort(stats.begin(), stats.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double total_n = 0.0, total_sum = 0.0;
  for (const auto& [mean, n] : stats) {
    total_n += n;
    total_sum += mean * n;
  }
  double grand = total_sum / total_n;

  double best = -1.0;
  double left_n = 0.0, left_sum = 0.0;
  for (std::size_t cut = 1; cut < stats.size(); ++cut) {
    left_n += stats[cut - 1].second;
    left_sum += stats[cut - 1].first * stats[cut - 1].second;
    double dl = left_sum / left_n - grand;
    double dr = (total_sum - left_sum) / (total_n - left_n) - grand;
    double delta = left_n * dl * dl + (total_n - left_n) * dr * dr;
    if (delta > best) {
      best = delta;
      if (cut_out) *cut_out = cut;
    }
  }
  return best;
}

/// The cut is chosen to maximize separation, so a naive two-group test is
/// biased towards splitting. The null distribution is therefore built from
/// the same max-over-cuts statistic on treatments resampled from the pool.
bool max_cut_significant(const std::vector<const TreatmentSamples*>& members,
                         double observed_delta, int resamples,
                         double confidence, Rng& rng) {
  std::vector<double> pool = pool_values(members);
  int at_least = 0;
  std::vector<std::pair<double, double>> stats(members.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t t = 0; t < members.size(); ++t) {
      std::size_t n = members[t]->values.size();
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += pool[rng.index(pool.size())];
      stats[t] = {sum / n, static_cast<double>(n)};
    }
    if (best_cut_delta(stats) >= observed_delta) ++at_least;
  }
  return static_cast<double>(at_least) / resamples < 1.0 - confidence;
}

void split_recursive(const std::vector<const TreatmentSamples*>& members,
                     double confidence, double a12_threshold, int resamples,
                     Rng& rng,
                     std::vector<std::vector<const TreatmentSamples*>>& out) {
  if (members.size() < 2) {
    out.push_back(members);
    return;
  }

  std::vector<std::pair<double, double>> stats;
  for (std::size_t t = 0; t < members.size(); ++t)
    stats.emplace_back(mean_of(members[t]->values),
                       static_cast<double>(members[t]->values.size()));
  std::size_t best_cut = 1;
  double best_delta = best_cut_delta(stats, &best_cut);

  std::vector<const TreatmentSamples*> left(members.begin(),
                                            members.begin() + best_cut);
  std::vector<const TreatmentSamples*> right(members.begin() + best_cut,
                                             members.end());
  std::vector<double> lv = pool_values(left);
  std::vector<double> rv = pool_values(right);

  bool accept =
      best_delta > 0.0 &&
      bootstrap_significant(lv, rv, resamples, confidence, rng) &&
      max_cut_significant(members, best_delta, resamples, confidence, rng) &&
      a12(lv, rv) >= a12_threshold;
  if (!accept) {
    out.push_back(members);
    return;
  }
  split_recursive(left, confidence, a12_threshold, resamples, rng, out);
  split_recursive(right, confidence, a12_threshold, resamples, rng, out);
}

}  // namespace

RankResult scott_knott(const std::vector<TreatmentSamples>& treatments,
                       double confidence, double a12_threshold, Rng& rng,
                       int resamples) {
  if (treatments.empty())
    throw std::invalid_argument("scott_knott: no treatments");

  std::vector<const TreatmentSamples*> sorted;
  for (const auto& t : treatments) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TreatmentSamples* a, const TreatmentSamples* b) {
                     return mean_of(a->values) > mean_of(b->values);
                   });

  std::vector<std::vector<const TreatmentSamples*>> clusters;
  split_recursive(sorted, confidence, a12_threshold, resamples, rng, clusters);

  RankResult result;
  int rank = 1;
  for (const auto& cluster : clusters) {
    for (const auto* t : cluster) result.rank[t->name] = rank;
    ++rank;
  }
  return result;
}

}  // namespace hypercmp
