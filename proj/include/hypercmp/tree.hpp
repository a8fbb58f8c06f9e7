#pragma once

#include <vector>

#include "hypercmp/rng.hpp"

namespace hypercmp {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;       // majority class (classification)
  double value = 0.0;  // mean target (regression)
  int n_samples = 0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeParams {
  enum class Criterion { Gini, Entropy, Variance };
  Criterion criterion = Criterion::Gini;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  int max_depth = -1;    // -1 = unbounded
  int max_features = -1; // candidate features per split, -1 = all
};

/// Binary decision tree grown greedily. Split candidates are midpoints
/// between consecutive distinct sorted feature values; rows with
/// value <= threshold go left. Majority-label ties resolve to class 0.
class Tree {
 public:
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  int predict_label(const std::vector<double>& row) const;
  double predict_value(const std::vector<double>& row) const;
  int depth() const;  // a lone root counts as depth 0

  static Tree build(const std::vector<std::vector<double>>& x,
                    const std::vector<double>& y,
                    const std::vector<int>& row_indices,
                    const TreeParams& params, Rng& rng);

 private:
  int build_node(const std::vector<std::vector<double>>& x,
                 const std::vector<double>& y, std::vector<int>& rows,
                 const TreeParams& params, int depth, Rng& rng);

  std::vector<TreeNode> nodes_;
};

}  // namespace hypercmp
