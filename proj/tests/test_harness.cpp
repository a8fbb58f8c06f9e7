#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypercmp/harness.hpp"

using namespace hypercmp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Release toy_release(const std::string& project, int version, uint64_t seed) {
  Release r;
  r.project = project;
  r.version = project + "-" + std::to_string(version);
  Rng rng(seed);
  for (int i = 0; i < 30; ++i) {
    double x0 = rng.uniform();
    double x1 = rng.uniform();
    r.instances.x.push_back({x0, x1});
    r.instances.y.push_back(x0 > 0.55 ? 1 : 0);
  }
  return r;
}

/// Three-release single-project corpus on disk plus its manifest.
std::string toy_manifest(const fs::path& dir) {
  for (int v = 1; v <= 3; ++v) {
    Release r = toy_release("toy", v, 100 + v);
    // pad features out to the full schema
    for (auto& row : r.instances.x) row.resize(20, 0.0);
    write_release(r, (dir / ("toy-" + std::to_string(v) + ".csv")).string());
  }
  fs::path manifest = dir / "manifest.json";
  std::ofstream out(manifest);
  out << R"({"toy": ["toy-1.csv", "toy-2.csv", "toy-3.csv"]})";
  return manifest.string();
}

ExperimentConfig small_config(const std::string& manifest,
                              const std::string& out_dir) {
  ExperimentConfig config;
  config.manifest_path = manifest;
  config.learners = {Family::Cart};
  config.optimizers = {OptimizerKind::Default, OptimizerKind::Random};
  config.goals = {Goal::FMeasure};
  config.repeats = 3;
  config.budget.lives = 2;
  config.budget.round_size = 4;
  config.out_dir = out_dir;
  return config;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// results.csv with the wall-clock columns (tune_secs, train_secs) removed;
// those are real measurements and differ between otherwise identical runs
std::string sans_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string field;
    for (int i = 0; std::getline(ss, field, ','); ++i) {
      if (i == 7 || i == 8) continue;
      out << field << ',';
    }
    out << '\n';
  }
  return out.str();
}

RunRecord score_record(const std::string& optimizer, int repeat, double score) {
  RunRecord r;
  r.project = "p";
  r.transition = 0;
  r.learner = "cart";
  r.optimizer = optimizer;
  r.goal = "f_measure";
  r.repeat = repeat;
  r.test_score = score;
  return r;
}

}  // namespace

TEST_CASE("run_cell with the default optimizer evaluates once") {
  Release train = toy_release("p", 1, 1);
  Release test = toy_release("p", 2, 2);
  ExperimentConfig config;
  config.manifest_path = "unused";

  RunRecord r = run_cell(train, test, 0, Family::Cart, OptimizerKind::Default,
                         Goal::FMeasure, 0, config);
  CHECK(r.evaluations == 1);
  CHECK(r.learner == "cart");
  CHECK(r.optimizer == "default");
  CHECK(r.test_score > 0.5);  // clean threshold signal, any tree finds it

  RunRecord again = run_cell(train, test, 0, Family::Cart,
                             OptimizerKind::Default, Goal::FMeasure, 0, config);
  CHECK(again.test_score == r.test_score);
  CHECK(again.best_setting == r.best_setting);
}

TEST_CASE("run_cell seeds depend on the repeat but not the optimizer") {
  Release train = toy_release("p", 1, 1);
  Release test = toy_release("p", 2, 2);
  ExperimentConfig config;
  config.manifest_path = "unused";
  config.budget.lives = 2;
  config.budget.round_size = 4;

  RunRecord r0 = run_cell(train, test, 0, Family::Knn, OptimizerKind::Random,
                          Goal::FMeasure, 0, config);
  RunRecord r1 = run_cell(train, test, 0, Family::Knn, OptimizerKind::Random,
                          Goal::FMeasure, 1, config);
  RunRecord r0b = run_cell(train, test, 0, Family::Knn, OptimizerKind::Random,
                           Goal::FMeasure, 0, config);
  CHECK(r0.best_setting == r0b.best_setting);
  CHECK(r0.test_score == r0b.test_score);
  // a different repeat draws different candidates
  CHECK((r0.best_setting != r1.best_setting || r0.test_score != r1.test_score));
}

TEST_CASE("run_experiment covers the full factorial in canonical order") {
  fs::path dir = fresh_dir("hypercmp_exp");
  ExperimentConfig config =
      small_config(toy_manifest(dir), (dir / "out").string());

  auto results = run_experiment(config);
  // 2 transitions x 1 learner x 2 optimizers x 1 goal x 3 repeats
  REQUIRE(results.size() == 12);
  std::size_t i = 0;
  for (int transition = 0; transition < 2; ++transition)
    for (const char* optimizer : {"default", "random"})
      for (int repeat = 0; repeat < 3; ++repeat) {
        CHECK(results[i].transition == transition);
        CHECK(results[i].optimizer == optimizer);
        CHECK(results[i].repeat == repeat);
        ++i;
      }

  auto loaded = read_results_csv((dir / "out" / "results.csv").string());
  REQUIRE(loaded.size() == results.size());
  for (std::size_t j = 0; j < results.size(); ++j) {
    CHECK(loaded[j].optimizer == results[j].optimizer);
    CHECK(loaded[j].evaluations == results[j].evaluations);
    CHECK(loaded[j].best_setting == results[j].best_setting);
    CHECK(loaded[j].test_score ==
          doctest::Approx(results[j].test_score).epsilon(1e-6));
  }
}

TEST_CASE("run_experiment resumes from a partial results file") {
  fs::path dir = fresh_dir("hypercmp_resume");
  ExperimentConfig config =
      small_config(toy_manifest(dir), (dir / "out").string());

  run_experiment(config);
  fs::path results_path = dir / "out" / "results.csv";
  std::string full = slurp(results_path);

  // keep the header and the first five records, then resume
  std::istringstream in(full);
  std::ostringstream partial;
  std::string line;
  for (int i = 0; i < 6 && std::getline(in, line); ++i) partial << line << '\n';
  {
    std::ofstream out(results_path, std::ios::trunc);
    out << partial.str();
  }
  run_experiment(config);
  CHECK(sans_timing(slurp(results_path)) == sans_timing(full));

  // a further run has nothing left to compute and is a no-op, byte for byte
  std::string resumed = slurp(results_path);
  run_experiment(config);
  CHECK(slurp(results_path) == resumed);
}

TEST_CASE("worker count does not change the output") {
  fs::path dir = fresh_dir("hypercmp_workers");
  std::string manifest = toy_manifest(dir);

  ExperimentConfig serial = small_config(manifest, (dir / "out1").string());
  ExperimentConfig parallel = small_config(manifest, (dir / "out4").string());
  parallel.workers = 4;

  run_experiment(serial);
  run_experiment(parallel);
  CHECK(sans_timing(slurp(dir / "out1" / "results.csv")) ==
        sans_timing(slurp(dir / "out4" / "results.csv")));
}

TEST_CASE("config validation rejects nonsense") {
  ExperimentConfig config;
  config.manifest_path = "m.json";
  CHECK_NOTHROW(config.validate());
  config.repeats = 0;
  CHECK_THROWS(config.validate());
  config = ExperimentConfig{};
  config.manifest_path = "";
  CHECK_THROWS(config.validate());
  config = ExperimentConfig{};
  config.manifest_path = "m.json";
  config.learners.clear();
  CHECK_THROWS(config.validate());
}

TEST_CASE("rank_transition separates a dominant optimizer") {
  std::vector<RunRecord> records;
  Rng gen(3);
  for (int repeat = 0; repeat < 20; ++repeat) {
    records.push_back(score_record("strong", repeat, 0.8 + 0.02 * gen.uniform()));
    records.push_back(score_record("weak", repeat, 0.2 + 0.02 * gen.uniform()));
  }
  std::vector<const RunRecord*> ptrs;
  for (const auto& r : records) ptrs.push_back(&r);

  RankResult ranks = rank_transition(ptrs, 20);
  CHECK(ranks.rank.at("strong") == 1);
  CHECK(ranks.rank.at("weak") == 2);

  CHECK_THROWS(rank_transition(ptrs, 19));  // repeat count mismatch
}

TEST_CASE("aggregate counts first ranks per learner and goal") {
  std::vector<RunRecord> records;
  Rng gen(5);
  for (int transition = 0; transition < 2; ++transition)
    for (int repeat = 0; repeat < 20; ++repeat) {
      RunRecord a = score_record("strong", repeat, 0.8 + 0.02 * gen.uniform());
      RunRecord b = score_record("weak", repeat, 0.2 + 0.02 * gen.uniform());
      a.transition = b.transition = transition;
      records.push_back(a);
      records.push_back(b);
    }

  ExperimentConfig config;
  config.manifest_path = "unused";
  config.learners = {Family::Cart};
  config.goals = {Goal::FMeasure};
  config.optimizers = {};  // names come from the records below
  WinMatrix wm;
  {
    ExperimentConfig c2 = config;
    c2.optimizers = {OptimizerKind::Default, OptimizerKind::Random};
    // remap the treatment names onto known optimizers for aggregation
    for (auto& r : records)
      r.optimizer = r.optimizer == "strong" ? "default" : "random";
    wm = aggregate(records, c2);
  }
  CHECK(wm.total_transitions == 2);
  auto& row = wm.counts.at({"cart", "f_measure"});
  CHECK(row.at("default") == 2);
  CHECK(row.at("random") == 0);
}

TEST_CASE("runtime table averages tuning plus training time") {
  std::vector<RunRecord> records;
  RunRecord a = score_record("random", 0, 0.5);
  a.tune_secs = 1.0;
  a.train_secs = 0.5;
  RunRecord b = score_record("random", 1, 0.5);
  b.tune_secs = 3.0;
  b.train_secs = 0.5;
  records.push_back(a);
  records.push_back(b);

  auto table = runtime_table(records);
  CHECK(table.at({"random", "cart"}) == doctest::Approx(2.5));
  CHECK_THROWS(runtime_table({}));
}

TEST_CASE("reports land on disk with sane shapes") {
  fs::path dir = fresh_dir("hypercmp_reports");
  ExperimentConfig config =
      small_config(toy_manifest(dir), (dir / "out").string());
  config.repeats = 5;
  auto results = run_experiment(config);
  write_reports(results, config, config.out_dir);

  CHECK(fs::exists(dir / "out" / "wins.csv"));
  CHECK(fs::exists(dir / "out" / "wins.txt"));
  CHECK(fs::exists(dir / "out" / "runtimes.csv"));

  std::string svg = slurp(dir / "out" / "wins.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("default") != std::string::npos);

  std::string wins = slurp(dir / "out" / "wins.csv");
  CHECK(wins.find("cart,f_measure,default,") != std::string::npos);
}
