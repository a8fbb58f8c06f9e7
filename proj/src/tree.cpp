#include "hypercmp/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hypercmp {

namespace {

double impurity(TreeParams::Criterion c, double sum, double sum_sq, double n) {
  double mean = sum / n;
  switch (c) {
    case TreeParams::Criterion::Gini: {
      double p = mean;  // binary labels, p = fraction of class 1
      return 2.0 * p * (1.0 - p);
    }
    case TreeParams::Criterion::Entropy: {
      double p = mean;
      double h = 0.0;
      if (p > 0.0) h -= p * std::log2(p);
      if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
      return h;
    }
    case TreeParams::Criterion::Variance:
      return sum_sq / n - mean * mean;
  }
  return 0.0;
}

std::vector<int> feature_candidates(std::size_t n_features, int max_features,
                                    Rng& rng) {
  std::vector<int> all(n_features);
  std::iota(all.begin(), all.end(), 0);
  if (max_features < 0 ||
      static_cast<std::size_t>(max_features) >= n_features)
    return all;
  // partial Fisher-Yates, then sorted for a deterministic scan order
  for (int i = 0; i < max_features; ++i) {
    std::size_t j = i + rng.index(all.size() - i);
    std::swap(all[i], all[j]);
  }
  all.resize(max_features);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

int Tree::predict_label(const std::vector<double>& row) const {
  int node = 0;
  while (!nodes_[node].is_leaf())
    node = row[nodes_[node].feature] <= nodes_[node].threshold
               ? nodes_[node].left
               : nodes_[node].right;
  return nodes_[node].label;
}

double Tree::predict_value(const std::vector<double>& row) const {
  int node = 0;
  while (!nodes_[node].is_leaf())
    node = row[nodes_[node].feature] <= nodes_[node].threshold
               ? nodes_[node].left
               : nodes_[node].right;
  return nodes_[node].value;
}

int Tree::depth() const {
  // iterative depth over the node array
  std::vector<int> depth_of(nodes_.size(), 0);
  int max_d = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_leaf()) {
      depth_of[nodes_[i].left] = depth_of[i] + 1;
      depth_of[nodes_[i].right] = depth_of[i] + 1;
      max_d = std::max(max_d, depth_of[i] + 1);
    }
  }
  return max_d;
}

Tree Tree::build(const std::vector<std::vector<double>>& x,
                 const std::vector<double>& y,
                 const std::vector<int>& row_indices,
                 const TreeParams& params, Rng& rng) {
  Tree t;
  std::vector<int> rows = row_indices;
  t.build_node(x, y, rows, params, 0, rng);
  return t;
}

int Tree::build_node(const std::vector<std::vector<double>>& x,
                     const std::vector<double>& y, std::vector<int>& rows,
                     const TreeParams& params, int depth, Rng& rng) {
  int node_id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  double n = static_cast<double>(rows.size());
  double sum = 0.0, sum_sq = 0.0;
  for (int r : rows) {
    sum += y[r];
    sum_sq += y[r] * y[r];
  }
  double mean = sum / n;

  auto make_leaf = [&]() {
    TreeNode& leaf = nodes_[node_id];
    leaf.n_samples = static_cast<int>(rows.size());
    leaf.value = mean;
    leaf.label = mean > 0.5 ? 1 : 0;  // tie -> non-defective
    return node_id;
  };

  bool pure = sum_sq / n - mean * mean <= 1e-12;
  if (pure || rows.size() < static_cast<std::size_t>(params.min_samples_split) ||
      (params.max_depth >= 0 && depth >= params.max_depth))
    return make_leaf();

  // best split: lowest weighted child impurity, first candidate wins ties
  int best_feature = -1;
  double best_threshold = 0.0;
  double best_score = std::numeric_limits<double>::infinity();

  std::vector<std::pair<double, double>> column;  // (feature value, target)
  for (int f : feature_candidates(x[rows[0]].size(), params.max_features, rng)) {
    column.clear();
    for (int r : rows) column.emplace_back(x[r][f], y[r]);
    std::sort(column.begin(), column.end());

    double left_sum = 0.0, left_sq = 0.0;
    for (std::size_t i = 1; i < column.size(); ++i) {
      left_sum += column[i - 1].second;
      left_sq += column[i - 1].second * column[i - 1].second;
      if (column[i].first <= column[i - 1].first) continue;  // not a boundary
      std::size_t nl = i, nr = column.size() - i;
      if (nl < static_cast<std::size_t>(params.min_samples_leaf) ||
          nr < static_cast<std::size_t>(params.min_samples_leaf))
        continue;
      double right_sum = sum - left_sum;
      double right_sq = sum_sq - left_sq;
      double score =
          (nl * impurity(params.criterion, left_sum, left_sq, nl) +
           nr * impurity(params.criterion, right_sum, right_sq, nr)) /
          n;
      if (score < best_score) {
        best_score = score;
        best_feature = f;
        best_threshold = (column[i - 1].first + column[i].first) / 2.0;
      }
    }
  }

  if (best_feature < 0) return make_leaf();

  std::vector<int> left_rows, right_rows;
  for (int r : rows)
    (x[r][best_feature] <= best_threshold ? left_rows : right_rows).push_back(r);
  rows.clear();
  rows.shrink_to_fit();

  nodes_[node_id].feature = best_feature;
  nodes_[node_id].threshold = best_threshold;
  nodes_[node_id].n_samples = static_cast<int>(n);
  nodes_[node_id].value = mean;
  nodes_[node_id].label = mean > 0.5 ? 1 : 0;
  int left = build_node(x, y, left_rows, params, depth + 1, rng);
  nodes_[node_id].left = left;
  int right = build_node(x, y, right_rows, params, depth + 1, rng);
  nodes_[node_id].right = right;
  return node_id;
}

}  // namespace hypercmp
