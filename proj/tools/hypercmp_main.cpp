#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypercmp/fixtures.hpp"
#include "hypercmp/harness.hpp"

namespace {

using namespace hypercmp;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int cmd_run(const std::string& manifest, const std::string& learners,
            const std::string& optimizers, const std::string& goals,
            int repeats, int lives, double time_budget, int round_size,
            std::uint64_t seed, int workers, const std::string& out_dir) {
  ExperimentConfig config;
  config.manifest_path = manifest;
  config.learners.clear();
  for (const auto& l : split_list(learners))
    config.learners.push_back(family_from_string(l));
  config.optimizers.clear();
  for (const auto& o : split_list(optimizers))
    config.optimizers.push_back(optimizer_from_string(o));
  config.goals.clear();
  for (const auto& g : split_list(goals))
    config.goals.push_back(goal_from_string(g));
  config.repeats = repeats;
  config.budget.lives = lives;
  config.budget.max_wall_secs = time_budget;
  config.budget.round_size = round_size;
  config.master_seed = seed;
  config.workers = workers;
  config.out_dir = out_dir;
  config.validate();

  std::vector<RunRecord> records = run_experiment(config);
  write_reports(records, config, out_dir);
  std::cout << "wrote " << records.size() << " records to " << out_dir
            << "/results.csv\n";
  return 0;
}

int cmd_tune(const std::string& learner, const std::string& optimizer,
             const std::string& goal_name, const std::string& train_csv,
             const std::string& validate_csv, std::uint64_t seed, int lives,
             double time_budget, int round_size,
             const std::string& space_file,
             const std::string& trajectory_csv) {
  Family family = family_from_string(learner);
  OptimizerKind kind = optimizer_from_string(optimizer);
  Goal goal = goal_from_string(goal_name);
  Release train_release = load_release(train_csv);
  Release validate_release = load_release(validate_csv);

  std::optional<ParamSpace> custom;
  if (!space_file.empty()) custom = space_from_json_file(space_file, learner);
  const ParamSpace& space = custom ? *custom : builtin_space(learner);

  long counter = 0;
  Objective objective([&](const ParamSetting& setting) {
    Rng rng(hash_combine(seed, static_cast<std::uint64_t>(++counter)));
    try {
      auto model = train(family, train_release.instances, setting, rng);
      return goal_score(goal,
                        confusion(model->predict_all(validate_release.instances.x),
                                  validate_release.instances.y));
    } catch (const std::exception&) {
      return 0.0;
    }
  });

  Budget budget;
  budget.lives = lives;
  budget.max_wall_secs = time_budget;
  budget.round_size = round_size;
  Rng rng(hash_combine(seed, hash_str("tune")));
  TuningResult result = tune(kind, space, objective, budget, rng);

  std::cout << "best setting:     " << result.best_setting.to_string() << "\n"
            << "validation score: " << result.best_score << "\n"
            << "evaluations:      " << result.evaluations_used << "\n"
            << "wall time (s):    " << result.wall_secs << "\n";
  if (!trajectory_csv.empty()) {
    std::ofstream out(trajectory_csv);
    out << "evaluation,best_so_far\n";
    for (const auto& [i, best] : result.trajectory)
      out << i << ',' << best << '\n';
  }
  return 0;
}

int cmd_rank(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::invalid_argument("cannot open " + csv_path);
  std::map<std::string, TreatmentSamples> by_name;
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("malformed row: " + line);
    std::string name = line.substr(0, comma);
    std::string value = line.substr(comma + 1);
    if (rows == 0 && name == "treatment") {  // optional header
      ++rows;
      continue;
    }
    try {
      auto& t = by_name[name];
      t.name = name;
      t.values.push_back(std::stod(value));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed value in row: " + line);
    }
    ++rows;
  }
  if (by_name.empty()) throw std::invalid_argument("no treatments in input");

  std::vector<TreatmentSamples> treatments;
  for (auto& [name, t] : by_name) treatments.push_back(std::move(t));
  Rng rng(0x5CA770CULL);
  RankResult ranks = scott_knott(treatments, 0.95, 0.6, rng);

  std::vector<std::pair<int, std::string>> ordered;
  for (const auto& [name, rank] : ranks.rank) ordered.emplace_back(rank, name);
  std::sort(ordered.begin(), ordered.end());
  for (const auto& [rank, name] : ordered) {
    for (const auto& t : treatments)
      if (t.name == name)
        std::cout << name << ',' << rank << ',' << median_of(t.values) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperparameter tuner benchmark for defect prediction"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run the full experiment");
  std::string manifest, out_dir = "out";
  std::string learners = "cart,rf,knn,svm";
  std::string optimizers = "default,grid,random,de,smac";
  std::string goals = "precision,f_measure";
  int repeats = 20, lives = 5, round_size = 10, workers = 1;
  double time_budget = 3600.0;
  std::uint64_t seed = 1;
  run->add_option("--manifest", manifest, "corpus manifest JSON")->required();
  run->add_option("--learners", learners, "comma list of learners");
  run->add_option("--optimizers", optimizers, "comma list of optimizers");
  run->add_option("--goals", goals, "comma list of goals");
  run->add_option("--repeats", repeats, "repeats per cell");
  run->add_option("--lives", lives, "budget lives");
  run->add_option("--time-budget-secs", time_budget, "tuning wall-clock cap");
  run->add_option("--round-size", round_size, "candidates per round");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--workers", workers, "concurrent cells");
  run->add_option("--out", out_dir, "output directory");

  // tune
  auto* tune_cmd = app.add_subcommand("tune", "one tuning run");
  std::string learner, optimizer, goal = "f_measure", train_csv, validate_csv;
  std::string space_file, trajectory_csv;
  tune_cmd->add_option("--learner", learner)->required();
  tune_cmd->add_option("--optimizer", optimizer)->required();
  tune_cmd->add_option("--goal", goal);
  tune_cmd->add_option("--train", train_csv)->required();
  tune_cmd->add_option("--validate", validate_csv)->required();
  tune_cmd->add_option("--seed", seed);
  tune_cmd->add_option("--lives", lives);
  tune_cmd->add_option("--time-budget-secs", time_budget);
  tune_cmd->add_option("--round-size", round_size);
  tune_cmd->add_option("--space", space_file, "space definition JSON");
  tune_cmd->add_option("--trajectory", trajectory_csv,
                       "write best-so-far trajectory CSV");

  // rank
  auto* rank = app.add_subcommand("rank", "Scott-Knott rank a treatment CSV");
  std::string rank_csv;
  rank->add_option("csv", rank_csv, "CSV of treatment,value rows")->required();

  // report
  auto* report = app.add_subcommand("report", "rebuild reports from results");
  std::string results_csv;
  report->add_option("--results", results_csv, "results.csv path")->required();
  report->add_option("--learners", learners, "comma list of learners");
  report->add_option("--optimizers", optimizers, "comma list of optimizers");
  report->add_option("--goals", goals, "comma list of goals");
  report->add_option("--repeats", repeats, "repeats per cell");
  report->add_option("--out", out_dir, "output directory");

  // fixtures
  auto* fixtures = app.add_subcommand("fixtures",
                                      "regenerate the synthetic corpus");
  std::string fixtures_dir = "fixtures";
  fixtures->add_option("--out", fixtures_dir, "target directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run)
      return cmd_run(manifest, learners, optimizers, goals, repeats, lives,
                     time_budget, round_size, seed, workers, out_dir);
    if (*tune_cmd)
      return cmd_tune(learner, optimizer, goal, train_csv, validate_csv, seed,
                      lives, time_budget, round_size, space_file,
                      trajectory_csv);
    if (*rank) return cmd_rank(rank_csv);
    if (*report) {
      hypercmp::ExperimentConfig config;
      config.manifest_path = "unused";
      config.learners.clear();
      for (const auto& l : split_list(learners))
        config.learners.push_back(hypercmp::family_from_string(l));
      config.optimizers.clear();
      for (const auto& o : split_list(optimizers))
        config.optimizers.push_back(hypercmp::optimizer_from_string(o));
      config.goals.clear();
      for (const auto& g : split_list(goals))
        config.goals.push_back(hypercmp::goal_from_string(g));
      config.repeats = repeats;
      auto records = hypercmp::read_results_csv(results_csv);
      hypercmp::write_reports(records, config, out_dir);
      std::cout << "reports written to " << out_dir << "\n";
      return 0;
    }
    if (*fixtures) {
      std::string path = hypercmp::write_fixture_corpus(fixtures_dir);
      std::cout << "manifest: " << path << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
