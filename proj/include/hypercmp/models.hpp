#pragma once

#include <memory>
#include <vector>

#include "hypercmp/learners.hpp"
#include "hypercmp/tree.hpp"

namespace hypercmp {

class CartModel : public Model {
 public:
  CartModel(Tree tree) : tree_(std::move(tree)) {}
  Family family() const override { return Family::Cart; }
  int predict(const std::vector<double>& row) const override {
    return tree_.predict_label(row);
  }
  const Tree& tree() const { return tree_; }

 private:
  Tree tree_;
};

class ForestModel : public Model {
 public:
  ForestModel(std::vector<Tree> trees) : trees_(std::move(trees)) {}
  Family family() const override { return Family::Rf; }
  int predict(const std::vector<double>& row) const override;
  const std::vector<Tree>& trees() const { return trees_; }

 private:
  std::vector<Tree> trees_;
};

class KnnModel : public Model {
 public:
  KnnModel(Scaler scaler, std::vector<std::vector<double>> x,
           std::vector<int> y, int k, bool distance_weighted)
      : scaler_(std::move(scaler)),
        x_(std::move(x)),
        y_(std::move(y)),
        k_(k),
        distance_weighted_(distance_weighted) {}
  Family family() const override { return Family::Knn; }
  int predict(const std::vector<double>& row) const override;

 private:
  Scaler scaler_;
  std::vector<std::vector<double>> x_;  // standardized
  std::vector<int> y_;
  int k_;
  bool distance_weighted_;
};

enum class SvmKernel { Rbf, Sigmoid };

class SvmModel : public Model {
 public:
  SvmModel(Scaler scaler, std::vector<std::vector<double>> x,
           std::vector<int> y_signed, std::vector<double> alphas, double bias,
           SvmKernel kernel, double gamma, double coef0, double c)
      : scaler_(std::move(scaler)),
        x_(std::move(x)),
        y_(std::move(y_signed)),
        alphas_(std::move(alphas)),
        bias_(bias),
        kernel_(kernel),
        gamma_(gamma),
        coef0_(coef0),
        c_(c) {}
  Family family() const override { return Family::Svm; }
  int predict(const std::vector<double>& row) const override;

  /// Kernel expansion plus bias for a standardized input.
  double decision(const std::vector<double>& standardized) const;

  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<int>& labels_signed() const { return y_; }
  double bias() const { return bias_; }
  double c() const { return c_; }
  const Scaler& scaler() const { return scaler_; }

 private:
  Scaler scaler_;
  std::vector<std::vector<double>> x_;  // standardized training rows
  std::vector<int> y_;                  // -1 / +1
  std::vector<double> alphas_;
  double bias_;
  SvmKernel kernel_;
  double gamma_;
  double coef0_;
  double c_;
};

double svm_kernel(SvmKernel kernel, double gamma, double coef0,
                  const std::vector<double>& a, const std::vector<double>& b);

/// Random forest in regression mode; backs the surrogate model of the
/// model-based optimizer. Posterior mean/variance come from the spread of
/// per-tree predictions.
class ForestRegressor {
 public:
  struct Stats {
    double mean = 0.0;
    double variance = 0.0;
  };

  void fit(const std::vector<std::vector<double>>& x,
           const std::vector<double>& y, int n_trees, Rng& rng);
  Stats predict_stats(const std::vector<double>& row) const;
  bool fitted() const { return !trees_.empty(); }

 private:
  std::vector<Tree> trees_;
};

}  // namespace hypercmp
