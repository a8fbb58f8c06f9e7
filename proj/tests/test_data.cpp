#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypercmp/data.hpp"
#include "hypercmp/fixtures.hpp"

using namespace hypercmp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string metric_header(const std::string& defect_col = "bug",
                          const std::string& drop = "") {
  std::string h;
  for (const char* name : kMetricColumns) {
    if (name == drop) continue;
    h += name;
    h += ',';
  }
  return h + defect_col;
}

std::string uniform_row(double value, const std::string& count,
                        int n_metrics = 20) {
  std::string row;
  for (int i = 0; i < n_metrics; ++i) row += std::to_string(value) + ",";
  return row + count;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("release round-trips through csv") {
  fs::path dir = fresh_dir("hypercmp_data_rt");
  fs::create_directories(dir / "demo");

  Release r;
  r.project = "demo";
  r.version = "demo-1";
  Rng rng(5);
  for (int i = 0; i < 25; ++i) {
    std::vector<double> row(20);
    for (auto& v : row) v = rng.uniform(0.0, 100.0);
    r.instances.x.push_back(row);
    r.instances.y.push_back(i % 3 == 0 ? 1 : 0);
  }

  std::string path = (dir / "demo" / "demo-1.csv").string();
  write_release(r, path);
  Release back = load_release(path);
  CHECK(back.project == "demo");
  CHECK(back.version == "demo-1");
  REQUIRE(back.instances.size() == r.instances.size());
  for (std::size_t i = 0; i < r.instances.size(); ++i) {
    CHECK(back.instances.y[i] == r.instances.y[i]);
    for (std::size_t j = 0; j < 20; ++j)
      CHECK(back.instances.x[i][j] == r.instances.x[i][j]);
  }
}

TEST_CASE("defect counts binarize and alternate column names work") {
  fs::path dir = fresh_dir("hypercmp_data_bin");
  for (const std::string& col : {"bug", "bugs", "defects"}) {
    fs::path p = dir / (col + ".csv");
    std::ofstream out(p);
    out << metric_header(col) << "\n"
        << uniform_row(1.0, "0") << "\n"
        << uniform_row(2.0, "1") << "\n"
        << uniform_row(3.0, "4") << "\n";
    out.close();
    Release r = load_release(p.string());
    CHECK(r.instances.y == std::vector<int>{0, 1, 1});
  }
}

TEST_CASE("schema violations are loud") {
  fs::path dir = fresh_dir("hypercmp_data_bad");
  auto error_of = [](const std::string& path) -> std::string {
    try {
      load_release(path);
    } catch (const std::runtime_error& e) {
      return e.what();
    }
    return "";
  };

  {
    std::ofstream out(dir / "no_loc.csv");
    out << metric_header("bug", "loc") << "\n"
        << uniform_row(1.0, "0", 19) << "\n";
  }
  std::string msg = error_of((dir / "no_loc.csv").string());
  CHECK(msg.find("loc") != std::string::npos);

  {
    std::ofstream out(dir / "no_defect.csv");
    out << metric_header("severity") << "\n" << uniform_row(1.0, "0") << "\n";
  }
  CHECK_THROWS(load_release((dir / "no_defect.csv").string()));

  {
    std::ofstream out(dir / "bad_cell.csv");
    out << metric_header() << "\n"
        << uniform_row(1.0, "0") << "\n"
        << uniform_row(2.0, "oops") << "\n";
  }
  msg = error_of((dir / "bad_cell.csv").string());
  CHECK(msg.find("3") != std::string::npos);  // names the offending row

  {
    std::ofstream out(dir / "empty.csv");
    out << metric_header() << "\n";
  }
  CHECK_THROWS(load_release((dir / "empty.csv").string()));
  CHECK_THROWS(load_release((dir / "missing.csv").string()));
}

TEST_CASE("split takes two thirds for tuning, rounded up") {
  auto make = [](int n) {
    Release r;
    for (int i = 0; i < n; ++i) {
      r.instances.x.push_back({double(i)});
      r.instances.y.push_back(i % 2);
    }
    return r;
  };

  Rng rng(9);
  SplitPair s = split_release(make(300), rng);
  CHECK(s.tune_train.size() == 200);
  CHECK(s.tune_validate.size() == 100);

  s = split_release(make(10), rng);
  CHECK(s.tune_train.size() == 7);
  CHECK(s.tune_validate.size() == 3);

  s = split_release(make(3), rng);
  CHECK(s.tune_train.size() == 2);
  CHECK(s.tune_validate.size() == 1);

  CHECK_THROWS(split_release(make(2), rng));
}

TEST_CASE("split is a partition of the release") {
  Release r;
  Rng gen(3);
  for (int i = 0; i < 50; ++i) {
    r.instances.x.push_back({double(i), gen.uniform()});
    r.instances.y.push_back(gen.uniform() < 0.3);
  }
  Rng rng(11);
  SplitPair s = split_release(r, rng);
  std::vector<double> ids;
  for (const auto& row : s.tune_train.x) ids.push_back(row[0]);
  for (const auto& row : s.tune_validate.x) ids.push_back(row[0]);
  std::sort(ids.begin(), ids.end());
  for (int i = 0; i < 50; ++i) CHECK(ids[i] == double(i));

  // different repeats shuffle differently
  Rng other(12);
  SplitPair s2 = split_release(r, other);
  CHECK(s.tune_train.x != s2.tune_train.x);
}

TEST_CASE("transition pairs walk consecutive releases") {
  ProjectSeries series;
  series.project = "p";
  for (int i = 1; i <= 4; ++i) {
    Release r;
    r.project = "p";
    r.version = "v" + std::to_string(i);
    r.instances.x.push_back({0.0});
    r.instances.y.push_back(0);
    series.releases.push_back(r);
  }
  auto pairs = transition_pairs(series);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].first->version == "v1");
  CHECK(pairs[0].second->version == "v2");
  CHECK(pairs[2].first->version == "v3");
  CHECK(pairs[2].second->version == "v4");
}

TEST_CASE("the fixture corpus loads through the manifest") {
  fs::path dir = fresh_dir("hypercmp_fixture_corpus");
  std::string manifest = write_fixture_corpus(dir.string());

  auto corpus = load_manifest(manifest);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].project == "alpha");
  CHECK(corpus[1].project == "beta");
  for (const auto& series : corpus) {
    CHECK(series.releases.size() == 3);
    for (const auto& release : series.releases) {
      CHECK(release.instances.size() >= 50);
      CHECK(release.instances.n_features() == 20);
      int positives = 0;
      for (int y : release.instances.y) positives += y;
      CHECK(positives >= 5);                                  // both classes
      CHECK(positives <= int(release.instances.size()) - 5);  // present
    }
  }
}

TEST_CASE("fixture generation is byte-identical per seed") {
  fs::path a = fresh_dir("hypercmp_fixture_a");
  fs::path b = fresh_dir("hypercmp_fixture_b");
  write_fixture_corpus(a.string(), 7);
  write_fixture_corpus(b.string(), 7);
  for (const auto& entry : fs::directory_iterator(a)) {
    fs::path twin = b / entry.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(slurp(entry.path()) == slurp(twin));
  }

  fs::path c = fresh_dir("hypercmp_fixture_c");
  write_fixture_corpus(c.string(), 8);
  CHECK(slurp(a / "alpha-1.csv") != slurp(c / "alpha-1.csv"));
}

TEST_CASE("manifests demand at least three releases per project") {
  fs::path dir = fresh_dir("hypercmp_manifest_short");
  Release r;
  r.project = "p";
  r.version = "p-1";
  for (int i = 0; i < 5; ++i) {
    r.instances.x.push_back(std::vector<double>(20, double(i)));
    r.instances.y.push_back(i % 2);
  }
  write_release(r, (dir / "p-1.csv").string());
  write_release(r, (dir / "p-2.csv").string());
  {
    std::ofstream out(dir / "short.json");
    out << R"({"p": ["p-1.csv", "p-2.csv"]})";
  }
  CHECK_THROWS(load_manifest((dir / "short.json").string()));
}
