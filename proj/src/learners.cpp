#include "hypercmp/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hypercmp/models.hpp"

namespace hypercmp {

Scaler Scaler::fit(const std::vector<std::vector<double>>& rows) {
  Scaler s;
  if (rows.empty()) return s;
  std::size_t d = rows[0].size();
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
  for (std::size_t j = 0; j < d; ++j) s.mean[j] /= rows.size();
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) {
      double dv = r[j] - s.mean[j];
      s.stddev[j] += dv * dv;
    }
  for (std::size_t j = 0; j < d; ++j)
    s.stddev[j] = std::sqrt(s.stddev[j] / rows.size());
  return s;
}

std::vector<double> Scaler::apply(const std::vector<double>& row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j)
    out[j] = stddev[j] > 0.0 ? (row[j] - mean[j]) / stddev[j] : 0.0;
  return out;
}

namespace {

void check_data(const TrainSet& data) {
  if (data.x.empty()) throw std::invalid_argument("empty training set");
  if (data.x.size() != data.y.size())
    throw std::invalid_argument("feature/label count mismatch");
}

TreeParams::Criterion criterion_from(const ParamSetting& params) {
  return params.get_cat("criterion") == "gini" ? TreeParams::Criterion::Gini
                                              : TreeParams::Criterion::Entropy;
}

int resolve_max_features(const ParamSetting& params, std::size_t n_features,
                         bool sqrt_when_auto) {
  if (params.is_auto("max_features")) {
    if (!sqrt_when_auto) return -1;  // all features
    return std::max(
        1, static_cast<int>(std::lround(std::sqrt(double(n_features)))));
  }
  double frac = params.get_double("max_features");
  return std::max(1, static_cast<int>(std::lround(frac * n_features)));
}

std::vector<double> labels_as_double(const std::vector<int>& y) {
  return std::vector<double>(y.begin(), y.end());
}

}  // namespace

std::unique_ptr<Model> train_cart(const TrainSet& data,
                                  const ParamSetting& params, Rng& rng) {
  check_data(data);
  cart_space().validate(params);

  TreeParams tp;
  tp.criterion = criterion_from(params);
  tp.min_samples_split = params.get_int("min_samples_split");
  tp.min_samples_leaf = params.get_int("min_samples_leaf");
  tp.max_depth = params.is_auto("max_depth") ? -1 : params.get_int("max_depth");
  tp.max_features = resolve_max_features(params, data.n_features(), false);

  std::vector<int> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  return std::make_unique<CartModel>(
      Tree::build(data.x, labels_as_double(data.y), rows, tp, rng));
}

int ForestModel::predict(const std::vector<double>& row) const {
  int votes = 0;
  for (const auto& t : trees_) votes += t.predict_label(row);
  // strict majority of defective votes; ties -> non-defective
  return 2 * votes > static_cast<int>(trees_.size()) ? 1 : 0;
}

std::unique_ptr<Model> train_rf(const TrainSet& data,
                                const ParamSetting& params, Rng& rng) {
  check_data(data);
  rf_space().validate(params);

  TreeParams tp;
  tp.criterion = criterion_from(params);
  tp.min_samples_split = params.get_int("min_samples_split");
  tp.min_samples_leaf = params.get_int("min_samples_leaf");
  tp.max_depth = -1;
  tp.max_features = resolve_max_features(params, data.n_features(), true);
  int n_estimators = params.get_int("n_estimators");

  std::vector<double> y = labels_as_double(data.y);
  std::vector<Tree> trees;
  trees.reserve(n_estimators);
  for (int t = 0; t < n_estimators; ++t) {
    std::vector<int> rows(data.size());
    for (auto& r : rows) r = static_cast<int>(rng.index(data.size()));
    trees.push_back(Tree::build(data.x, y, rows, tp, rng));
  }
  return std::make_unique<ForestModel>(std::move(trees));
}

void ForestRegressor::fit(const std::vector<std::vector<double>>& x,
                          const std::vector<double>& y, int n_trees,
                          Rng& rng) {
  TreeParams tp;
  tp.criterion = TreeParams::Criterion::Variance;
  tp.min_samples_split = 2;
  tp.min_samples_leaf = 1;
  trees_.clear();
  trees_.reserve(n_trees);
  for (int t = 0; t < n_trees; ++t) {
    std::vector<int> rows(x.size());
    for (auto& r : rows) r = static_cast<int>(rng.index(x.size()));
    trees_.push_back(Tree::build(x, y, rows, tp, rng));
  }
}

ForestRegressor::Stats ForestRegressor::predict_stats(
    const std::vector<double>& row) const {
  Stats s;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& t : trees_) {
    double v = t.predict_value(row);
    sum += v;
    sum_sq += v * v;
  }
  double n = static_cast<double>(trees_.size());
  s.mean = sum / n;
  s.variance = std::max(0.0, sum_sq / n - s.mean * s.mean);
  return s;
}

std::unique_ptr<Model> train(Family family, const TrainSet& data,
                             const ParamSetting& params, Rng& rng) {
  switch (family) {
    case Family::Cart: return train_cart(data, params, rng);
    case Family::Rf: return train_rf(data, params, rng);
    case Family::Knn: return train_knn(data, params);
    case Family::Svm: return train_svm(data, params, rng);
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace hypercmp
