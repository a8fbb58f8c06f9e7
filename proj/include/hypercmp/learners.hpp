#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercmp/param_space.hpp"
#include "hypercmp/rng.hpp"

namespace hypercmp {

enum class Family { Cart, Rf, Knn, Svm };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::Cart: return "cart";
    case Family::Rf: return "rf";
    case Family::Knn: return "knn";
    case Family::Svm: return "svm";
  }
  return "?";
}

inline Family family_from_string(const std::string& s) {
  if (s == "cart") return Family::Cart;
  if (s == "rf") return Family::Rf;
  if (s == "knn") return Family::Knn;
  if (s == "svm") return Family::Svm;
  throw std::invalid_argument("unknown learner: " + s);
}

struct TrainSet {
  std::vector<std::vector<double>> x;  // rows = instances
  std::vector<int> y;                  // 1 = defective

  std::size_t size() const { return x.size(); }
  std::size_t n_features() const { return x.empty() ? 0 : x[0].size(); }
};

/// Per-feature z-score standardization. Constant columns map to 0.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Scaler fit(const std::vector<std::vector<double>>& rows);
  std::vector<double> apply(const std::vector<double>& row) const;
};

/// A fitted classifier. Immutable after training; predictions are
/// deterministic functions of the fitted state.
class Model {
 public:
  virtual ~Model() = default;
  virtual Family family() const = 0;
  virtual int predict(const std::vector<double>& row) const = 0;

  std::vector<int> predict_all(
      const std::vector<std::vector<double>>& rows) const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(predict(r));
    return out;
  }
};

std::unique_ptr<Model> train_cart(const TrainSet& data,
                                  const ParamSetting& params, Rng& rng);
std::unique_ptr<Model> train_rf(const TrainSet& data,
                                const ParamSetting& params, Rng& rng);
std::unique_ptr<Model> train_knn(const TrainSet& data,
                                 const ParamSetting& params);
std::unique_ptr<Model> train_svm(const TrainSet& data,
                                 const ParamSetting& params, Rng& rng);

std::unique_ptr<Model> train(Family family, const TrainSet& data,
                             const ParamSetting& params, Rng& rng);

}  // namespace hypercmp
