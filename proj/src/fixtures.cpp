#include "hypercmp/fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <vector>

#include "hypercmp/data.hpp"
#include "hypercmp/rng.hpp"

namespace hypercmp {

namespace {

constexpr int kFeatures = 20;

/// Fixed per-project linear map from a 2-d latent space into the 20 metric
/// columns; code metrics are heavily correlated, and routing all columns
/// through the same latent signal keeps neighborhood structure intact after
/// standardization.
struct LatentMap {
  std::vector<double> coef_u, coef_v, offset, scale;

  static LatentMap draw(Rng& rng) {
    LatentMap m;
    for (int j = 0; j < kFeatures; ++j) {
      m.coef_u.push_back(rng.normal());
      m.coef_v.push_back(rng.normal());
      m.offset.push_back(rng.uniform(0.0, 20.0));
      m.scale.push_back(rng.uniform(0.5, 10.0));
    }
    return m;
  }

  std::vector<double> project(double u, double v, Rng& rng) const {
    std::vector<double> row(kFeatures);
    for (int j = 0; j < kFeatures; ++j)
      row[j] = scale[j] * (coef_u[j] * u + coef_v[j] * v +
                           0.05 * rng.normal()) +
               offset[j];
    return row;
  }
};

Release make_release(const std::string& project, const std::string& version,
                     const LatentMap& map,
                     const std::vector<std::pair<double, double>>& pos_centers,
                     int pos_per_center, int n_negatives, bool blob_negatives,
                     Rng& rng) {
  Release rel;
  rel.project = project;
  rel.version = version;

  for (const auto& [cu, cv] : pos_centers)
    for (int i = 0; i < pos_per_center; ++i) {
      double u = cu + 0.05 * rng.normal();
      double v = cv + 0.05 * rng.normal();
      rel.instances.x.push_back(map.project(u, v, rng));
      rel.instances.y.push_back(1);
    }

  int placed = 0;
  while (placed < n_negatives) {
    double u, v;
    if (blob_negatives) {
      u = 2.0 + 0.8 * rng.normal();
      v = 2.0 + 0.8 * rng.normal();
    } else {
      u = rng.uniform(-4.0, 4.0);
      v = rng.uniform(-4.0, 4.0);
    }
    bool too_close = false;
    for (const auto& [cu, cv] : pos_centers) {
      double du = u - cu, dv = v - cv;
      if (du * du + dv * dv < 1.0) {
        too_close = true;
        break;
      }
    }
    if (too_close) continue;
    rel.instances.x.push_back(map.project(u, v, rng));
    rel.instances.y.push_back(0);
    ++placed;
  }
  return rel;
}

}  // namespace

std::string write_fixture_corpus(const std::string& dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  // alpha: one tight defective blob, linearly separated from the clean code
  {
    Rng setup(hash_combine(seed, hash_str("alpha")));
    LatentMap map = LatentMap::draw(setup);
    std::vector<std::pair<double, double>> centers = {{5.0, 5.0}};
    for (int r = 1; r <= 3; ++r) {
      Rng rng(hash_combine(seed, hash_str("alpha"), r));
      Release rel = make_release("alpha", "alpha-" + std::to_string(r), map,
                                 centers, 24 + 2 * r, 60 + 4 * r, true, rng);
      write_release(rel, (fs::path(dir) / (rel.version + ".csv")).string());
    }
  }

  // beta: defective classes come in pairs scattered across the code base;
  // the centers persist across releases, only the draws around them change
  {
    Rng setup(hash_combine(seed, hash_str("beta")));
    LatentMap map = LatentMap::draw(setup);
    std::vector<std::pair<double, double>> centers;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j)
        centers.emplace_back(-3.0 + 2.0 * i + setup.uniform(-0.3, 0.3),
                             -2.5 + 2.5 * j + setup.uniform(-0.3, 0.3));
    for (int r = 1; r <= 3; ++r) {
      Rng rng(hash_combine(seed, hash_str("beta"), r));
      Release rel = make_release("beta", "beta-" + std::to_string(r), map,
                                 centers, 2, 62 + 4 * r, false, rng);
      write_release(rel, (fs::path(dir) / (rel.version + ".csv")).string());
    }
  }

  fs::path manifest = fs::path(dir) / "fixtures.json";
  std::ofstream out(manifest);
  out << "{\n"
      << "  \"alpha\": [\"alpha-1.csv\", \"alpha-2.csv\", \"alpha-3.csv\"],\n"
      << "  \"beta\": [\"beta-1.csv\", \"beta-2.csv\", \"beta-3.csv\"]\n"
      << "}\n";
  return manifest.string();
}

}  // namespace hypercmp
