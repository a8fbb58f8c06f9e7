#include <doctest.h>

#include <cmath>

#include "hypercmp/models.hpp"

using namespace hypercmp;

namespace {

ParamSetting cart_params(
    std::map<std::string, Value> overrides = {}) {
  ParamSetting s = default_setting(cart_space());
  for (auto& [k, v] : overrides) s.values[k] = v;
  return s;
}

ParamSetting rf_params(std::map<std::string, Value> overrides = {}) {
  ParamSetting s = default_setting(rf_space());
  for (auto& [k, v] : overrides) s.values[k] = v;
  return s;
}

ParamSetting knn_params(std::map<std::string, Value> overrides = {}) {
  ParamSetting s = default_setting(knn_space());
  for (auto& [k, v] : overrides) s.values[k] = v;
  return s;
}

ParamSetting svm_params(std::map<std::string, Value> overrides = {}) {
  ParamSetting s = default_setting(svm_space());
  for (auto& [k, v] : overrides) s.values[k] = v;
  return s;
}

/// n rows over `width` features where only the first two carry the values
/// and the rest are zero.
TrainSet planar(const std::vector<std::pair<double, double>>& points,
                const std::vector<int>& labels, std::size_t width = 2) {
  TrainSet data;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> row(width, 0.0);
    row[0] = points[i].first;
    row[1] = points[i].second;
    data.x.push_back(row);
    data.y.push_back(labels[i]);
  }
  return data;
}

double training_accuracy(const Model& m, const TrainSet& data) {
  int hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    hits += m.predict(data.x[i]) == data.y[i];
  return static_cast<double>(hits) / data.size();
}

}  // namespace

TEST_CASE("cart: pure data collapses to a single leaf") {
  TrainSet data = planar({{0, 0}, {1, 2}, {3, 1}}, {1, 1, 1});
  Rng rng(1);
  auto m = train_cart(data, cart_params(), rng);
  auto* cart = dynamic_cast<CartModel*>(m.get());
  REQUIRE(cart != nullptr);
  CHECK(cart->tree().nodes().size() == 1);
  CHECK(training_accuracy(*m, data) == 1.0);
}

TEST_CASE("cart: solves 4-point xor with axis splits") {
  TrainSet data = planar({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
  Rng rng(1);
  auto m = train_cart(data, cart_params({{"max_features", 1.0}}), rng);
  CHECK(training_accuracy(*m, data) == 1.0);
  auto* cart = dynamic_cast<CartModel*>(m.get());
  CHECK(cart->tree().depth() == 2);
}

TEST_CASE("cart: min_samples_split forces a leaf on small data") {
  TrainSet data = planar({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0},
                          {2, 1}, {3, 0}, {3, 1}, {4, 0}, {4, 1}},
                         {1, 1, 1, 0, 0, 0, 0, 0, 0, 0});
  Rng rng(1);
  auto m = train_cart(data, cart_params({{"min_samples_split", 30}}), rng);
  auto* cart = dynamic_cast<CartModel*>(m.get());
  CHECK(cart->tree().nodes().size() == 1);
  CHECK(cart->tree().nodes()[0].label == 0);  // majority class
}

TEST_CASE("cart: structural constraints hold over random data") {
  Rng gen(11);
  TrainSet data;
  for (int i = 0; i < 120; ++i) {
    std::vector<double> row(5);
    for (auto& v : row) v = gen.uniform();
    data.x.push_back(row);
    data.y.push_back(gen.uniform() < 0.4 ? 1 : 0);
  }
  ParamSetting params = cart_params({{"min_samples_split", 10},
                                     {"min_samples_leaf", 4},
                                     {"max_depth", 6},
                                     {"max_features", 0.6}});
  Rng rng(2);
  auto m = train_cart(data, params, rng);
  const Tree& tree = dynamic_cast<CartModel*>(m.get())->tree();
  CHECK(tree.depth() <= 6);
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf())
      CHECK(node.n_samples >= 4);
    else
      CHECK(node.n_samples >= 10);
  }
}

TEST_CASE("cart: rejects settings that violate the space") {
  TrainSet data = planar({{0, 0}, {1, 1}, {2, 2}}, {0, 1, 0});
  Rng rng(1);
  CHECK_THROWS(train_cart(data, cart_params({{"min_samples_split", 500}}), rng));
}

TEST_CASE("rf: one-class data and determinism") {
  TrainSet data = planar({{0, 0}, {1, 0}, {2, 1}, {3, 1}}, {1, 1, 1, 1});
  Rng rng(5);
  auto m = train_rf(data, rf_params(), rng);
  for (const auto& row : data.x) CHECK(m->predict(row) == 1);

  TrainSet probe = planar({{0.5, 0.2}, {2.5, 0.9}}, {0, 0});
  Rng r1(9), r2(9);
  auto m1 = train_rf(data, rf_params(), r1);
  auto m2 = train_rf(data, rf_params(), r2);
  CHECK(m1->predict_all(probe.x) == m2->predict_all(probe.x));
}

TEST_CASE("rf: noisy-data regression value beats a single tree") {
  // fixed-seed measurement, frozen as a regression check
  Rng gen(123);
  TrainSet data;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(6);
    for (auto& v : row) v = gen.uniform();
    int label = row[0] + row[1] > 1.0 ? 1 : 0;
    if (gen.uniform() < 0.25) label = 1 - label;  // noise
    data.x.push_back(row);
    data.y.push_back(label);
  }
  TrainSet test;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> row(6);
    for (auto& v : row) v = gen.uniform();
    test.x.push_back(row);
    test.y.push_back(row[0] + row[1] > 1.0 ? 1 : 0);
  }
  Rng rf_rng(7), cart_rng(7);
  auto forest = train_rf(data, rf_params({{"n_estimators", 50},
                                          {"min_samples_leaf", 3}}),
                         rf_rng);
  auto cart = train_cart(data, cart_params(), cart_rng);
  CHECK(training_accuracy(*forest, test) >= training_accuracy(*cart, test));
}

TEST_CASE("knn: nearest neighbour basics") {
  TrainSet data = planar({{0, 0}, {1, 1}}, {0, 1});
  auto m = train_knn(data, knn_params({{"n_neighbors", 2}}));
  // k = |data| with uniform weights: global majority is a tie -> class 0
  CHECK(m->predict({0.1, 0.1}) == 0);

  TrainSet bigger = planar({{0, 0}, {0.1, 0}, {1, 1}}, {0, 0, 1});
  auto m1 = train_knn(bigger, knn_params({{"n_neighbors", 2}}));
  CHECK(m1->predict({0.05, 0.0}) == 0);

  CHECK_THROWS(train_knn(data, knn_params({{"n_neighbors", 3}})));
}

TEST_CASE("knn: k equals data size yields the global majority") {
  TrainSet data = planar({{0, 0}, {5, 5}, {9, 0}, {0, 9}, {4, 4}},
                         {1, 1, 1, 0, 0});
  auto m = train_knn(data, knn_params({{"n_neighbors", 5}}));
  CHECK(m->predict({0, 0}) == 1);
  CHECK(m->predict({9, 9}) == 1);
}

TEST_CASE("knn: exact match dominates under distance weights") {
  TrainSet data = planar({{0, 0}, {0.2, 0}, {0.2, 0.2}, {5, 5}, {6, 6}},
                         {1, 0, 0, 0, 0});
  auto m = train_knn(data, knn_params({{"n_neighbors", 4},
                                       {"weights", std::string("distance")}}));
  CHECK(m->predict({0, 0}) == 1);
}

TEST_CASE("svm: separable clusters reach full training accuracy") {
  std::vector<std::pair<double, double>> pts;
  std::vector<int> labels;
  Rng gen(3);
  for (int i = 0; i < 20; ++i) {
    pts.push_back({-1.0 + gen.uniform(-0.1, 0.1), 0.0});
    labels.push_back(0);
    pts.push_back({1.0 + gen.uniform(-0.1, 0.1), 0.0});
    labels.push_back(1);
  }
  TrainSet data = planar(pts, labels);
  Rng rng(17);
  auto m = train_svm(data, svm_params({{"C", 100.0}, {"gamma", 1.0}}), rng);
  CHECK(training_accuracy(*m, data) == 1.0);

  // a duplicate of a training point keeps its class
  CHECK(m->predict(data.x[1]) == data.y[1]);

  // multipliers stay inside the box
  auto* svm = dynamic_cast<SvmModel*>(m.get());
  REQUIRE(svm != nullptr);
  for (double a : svm->alphas()) {
    CHECK(a >= 0.0);
    CHECK(a <= svm->c());
  }
}

TEST_CASE("svm: kkt tolerance holds after convergence") {
  std::vector<std::pair<double, double>> pts;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    pts.push_back({-1.0 + 0.01 * i, 0.0});
    labels.push_back(0);
    pts.push_back({1.0 + 0.01 * i, 0.0});
    labels.push_back(1);
  }
  TrainSet data = planar(pts, labels);
  Rng rng(5);
  auto m = train_svm(data, svm_params({{"C", 10.0}, {"gamma", 1.0}}), rng);
  auto* svm = dynamic_cast<SvmModel*>(m.get());

  const double tol = 1e-3;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double yi = svm->labels_signed()[i];
    double ei = svm->decision(svm->scaler().apply(data.x[i])) - yi;
    double a = svm->alphas()[i];
    bool violates = (yi * ei < -2 * tol && a < svm->c() - 1e-9) ||
                    (yi * ei > 2 * tol && a > 1e-9);
    CHECK_FALSE(violates);
  }
}

TEST_CASE("svm: single-class data is an error") {
  TrainSet data = planar({{0, 0}, {1, 1}}, {1, 1});
  Rng rng(1);
  CHECK_THROWS(train_svm(data, svm_params(), rng));
}

TEST_CASE("knn and svm ignore positive rescaling of a feature") {
  Rng gen(21);
  TrainSet data;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> row = {gen.uniform(), gen.uniform(), gen.uniform()};
    data.x.push_back(row);
    data.y.push_back(row[0] > 0.5 ? 1 : 0);
  }
  TrainSet scaled = data;
  for (auto& row : scaled.x) row[0] *= 137.0;

  std::vector<std::vector<double>> probes;
  for (int i = 0; i < 10; ++i)
    probes.push_back({gen.uniform(), gen.uniform(), gen.uniform()});
  std::vector<std::vector<double>> scaled_probes = probes;
  for (auto& row : scaled_probes) row[0] *= 137.0;

  auto knn_a = train_knn(data, knn_params());
  auto knn_b = train_knn(scaled, knn_params());
  CHECK(knn_a->predict_all(probes) == knn_b->predict_all(scaled_probes));

  Rng ra(31), rb(31);
  auto svm_a = train_svm(data, svm_params({{"gamma", 0.5}}), ra);
  auto svm_b = train_svm(scaled, svm_params({{"gamma", 0.5}}), rb);
  CHECK(svm_a->predict_all(probes) == svm_b->predict_all(scaled_probes));
}

TEST_CASE("cart is invariant to monotone feature transforms") {
  // fixture chosen so no two candidate splits tie
  TrainSet data = planar({{0.1, 0.9}, {0.4, 0.3}, {0.7, 0.8},
                          {1.4, 0.2}, {2.2, 0.6}, {3.1, 0.4}},
                         {0, 0, 1, 1, 1, 0});
  TrainSet warped = data;
  for (auto& row : warped.x) {
    row[0] = std::exp(row[0]);
    row[1] = row[1] * row[1] * row[1];
  }
  Rng ra(2), rb(2);
  auto a = train_cart(data, cart_params(), ra);
  auto b = train_cart(warped, cart_params(), rb);
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(a->predict(data.x[i]) == b->predict(warped.x[i]));
}

TEST_CASE("all families are deterministic under a fixed seed") {
  Rng gen(77);
  TrainSet data;
  for (int i = 0; i < 60; ++i) {
    std::vector<double> row(4);
    for (auto& v : row) v = gen.uniform();
    data.x.push_back(row);
    data.y.push_back(row[2] > 0.5 ? 1 : 0);
  }
  std::vector<std::vector<double>> probes;
  for (int i = 0; i < 15; ++i)
    probes.push_back({gen.uniform(), gen.uniform(), gen.uniform(),
                      gen.uniform()});

  for (Family family : {Family::Cart, Family::Rf, Family::Knn, Family::Svm}) {
    ParamSetting params = default_setting(builtin_space(to_string(family)));
    Rng r1(99), r2(99);
    auto m1 = train(family, data, params, r1);
    auto m2 = train(family, data, params, r2);
    CHECK(m1->predict_all(probes) == m2->predict_all(probes));
  }
}
