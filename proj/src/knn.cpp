#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypercmp/models.hpp"

namespace hypercmp {

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double delta = a[i] - b[i];
    d += delta * delta;
  }
  return d;
}

}  // namespace

int KnnModel::predict(const std::vector<double>& row) const {
  std::vector<double> q = scaler_.apply(row);

  // (squared distance, training row index); index breaks distance ties
  std::vector<std::pair<double, int>> ranked(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i)
    ranked[i] = {sq_distance(q, x_[i]), static_cast<int>(i)};
  std::partial_sort(ranked.begin(), ranked.begin() + k_, ranked.end());

  if (distance_weighted_) {
    // an exact match dominates the vote outright
    for (int i = 0; i < k_; ++i)
      if (ranked[i].first == 0.0) return y_[ranked[i].second];
    double w1 = 0.0, w0 = 0.0;
    for (int i = 0; i < k_; ++i) {
      double w = 1.0 / std::sqrt(ranked[i].first);
      (y_[ranked[i].second] ? w1 : w0) += w;
    }
    return w1 > w0 ? 1 : 0;
  }

  int votes = 0;
  for (int i = 0; i < k_; ++i) votes += y_[ranked[i].second];
  return 2 * votes > k_ ? 1 : 0;  // ties -> non-defective
}

std::unique_ptr<Model> train_knn(const TrainSet& data,
                                 const ParamSetting& params) {
  if (data.x.empty()) throw std::invalid_argument("empty training set");
  if (data.x.size() != data.y.size())
    throw std::invalid_argument("feature/label count mismatch");
  knn_space().validate(params);

  int k = params.get_int("n_neighbors");
  if (static_cast<std::size_t>(k) > data.size())
    throw std::invalid_argument("n_neighbors exceeds training set size");
  bool distance_weighted = params.get_cat("weights") == "distance";

  Scaler scaler = Scaler::fit(data.x);
  std::vector<std::vector<double>> standardized;
  standardized.reserve(data.size());
  for (const auto& r : data.x) standardized.push_back(scaler.apply(r));
  return std::make_unique<KnnModel>(std::move(scaler), std::move(standardized),
                                    data.y, k, distance_weighted);
}

}  // namespace hypercmp
