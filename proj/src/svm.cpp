#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypercmp/models.hpp"

namespace hypercmp {

double svm_kernel(SvmKernel kernel, double gamma, double coef0,
                  const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    double d = a[i] - b[i];
    sq += d * d;
  }
  return kernel == SvmKernel::Rbf ? std::exp(-gamma * sq)
                                  : std::tanh(gamma * dot + coef0);
}

double SvmModel::decision(const std::vector<double>& standardized) const {
  double f = bias_;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (alphas_[i] == 0.0) continue;
    f += alphas_[i] * y_[i] *
         svm_kernel(kernel_, gamma_, coef0_, x_[i], standardized);
  }
  return f;
}

int SvmModel::predict(const std::vector<double>& row) const {
  // sign 0 -> non-defective
  return decision(scaler_.apply(row)) > 0.0 ? 1 : 0;
}

std::unique_ptr<Model> train_svm(const TrainSet& data,
                                 const ParamSetting& params, Rng& rng) {
  if (data.x.empty()) throw std::invalid_argument("empty training set");
  if (data.x.size() != data.y.size())
    throw std::invalid_argument("feature/label count mismatch");
  svm_space().validate(params);

  bool has_pos = false, has_neg = false;
  for (int label : data.y) (label ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument("svm requires both classes in training data");

  double c = params.get_double("C");
  SvmKernel kernel = params.get_cat("kernel") == "rbf" ? SvmKernel::Rbf
                                                       : SvmKernel::Sigmoid;
  double coef0 = params.get_double("coef0");
  double gamma = params.is_auto("gamma") ? 1.0 / data.n_features()
                                         : params.get_double("gamma");

  Scaler scaler = Scaler::fit(data.x);
  std::vector<std::vector<double>> x;
  x.reserve(data.size());
  for (const auto& r : data.x) x.push_back(scaler.apply(r));
  std::vector<int> y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) y[i] = data.y[i] ? 1 : -1;

  const std::size_t n = x.size();
  std::vector<std::vector<double>> k(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      k[i][j] = k[j][i] = svm_kernel(kernel, gamma, coef0, x[i], x[j]);

  // Simplified sequential minimal optimization.
  const double tol = 1e-3;
  const int max_passes = 5;
  const int max_iterations = 10000;

  std::vector<double> alpha(n, 0.0);
  double b = 0.0;

  auto decision_at = [&](std::size_t i) {
    double f = b;
    for (std::size_t m = 0; m < n; ++m)
      if (alpha[m] != 0.0) f += alpha[m] * y[m] * k[m][i];
    return f;
  };

  int passes = 0, iterations = 0;
  while (passes < max_passes && iterations < max_iterations) {
    ++iterations;
    int changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double ei = decision_at(i) - y[i];
      if (!((y[i] * ei < -tol && alpha[i] < c) ||
            (y[i] * ei > tol && alpha[i] > 0.0)))
        continue;
      std::size_t j = rng.index(n - 1);
      if (j >= i) ++j;
      double ej = decision_at(j) - y[j];

      double ai_old = alpha[i], aj_old = alpha[j];
      double lo, hi;
      if (y[i] != y[j]) {
        lo = std::max(0.0, aj_old - ai_old);
        hi = std::min(c, c + aj_old - ai_old);
      } else {
        lo = std::max(0.0, ai_old + aj_old - c);
        hi = std::min(c, ai_old + aj_old);
      }
      if (lo >= hi) continue;
      double eta = 2.0 * k[i][j] - k[i][i] - k[j][j];
      if (eta >= 0.0) continue;

      double aj = aj_old - y[j] * (ei - ej) / eta;
      aj = std::clamp(aj, lo, hi);
      if (std::abs(aj - aj_old) < 1e-5) continue;
      // roundoff in the paired update can push ai a hair outside the box
      double ai = std::clamp(ai_old + y[i] * y[j] * (aj_old - aj), 0.0, c);

      double b1 = b - ei - y[i] * (ai - ai_old) * k[i][i] -
                  y[j] * (aj - aj_old) * k[i][j];
      double b2 = b - ej - y[i] * (ai - ai_old) * k[i][j] -
                  y[j] * (aj - aj_old) * k[j][j];
      if (ai > 0.0 && ai < c)
        b = b1;
      else if (aj > 0.0 && aj < c)
        b = b2;
      else
        b = (b1 + b2) / 2.0;

      alpha[i] = ai;
      alpha[j] = aj;
      ++changed;
    }
    passes = changed == 0 ? passes + 1 : 0;
  }

  return std::make_unique<SvmModel>(std::move(scaler), std::move(x),
                                    std::move(y), std::move(alpha), b, kernel,
                                    gamma, coef0, c);
}

}  // namespace hypercmp
