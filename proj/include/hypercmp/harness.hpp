#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypercmp/data.hpp"
#include "hypercmp/evaluation.hpp"
#include "hypercmp/learners.hpp"
#include "hypercmp/optimizers.hpp"
#include "hypercmp/stats.hpp"

namespace hypercmp {

struct ExperimentConfig {
  std::string manifest_path;
  std::vector<Family> learners = {Family::Cart, Family::Rf, Family::Knn,
                                  Family::Svm};
  std::vector<OptimizerKind> optimizers = {
      OptimizerKind::Default, OptimizerKind::Grid, OptimizerKind::Random,
      OptimizerKind::De, OptimizerKind::Smac};
  std::vector<Goal> goals = {Goal::Precision, Goal::FMeasure};
  int repeats = 20;
  Budget budget;
  int grid_points = 5;
  std::uint64_t master_seed = 1;
  int workers = 1;
  std::string out_dir = "out";

  void validate() const;  // throws std::invalid_argument
};

struct RunRecord {
  std::string project;
  int transition = 0;  // global transition index across the corpus
  std::string learner;
  std::string optimizer;
  std::string goal;
  int repeat = 0;
  double test_score = 0.0;  // goal evaluated on release i+1
  double tune_secs = 0.0;
  double train_secs = 0.0;
  long evaluations = 0;
  std::string best_setting;
};

/// Tune on release i (2/3 train, 1/3 validate), retrain the winner on all of
/// release i, score the tuning goal on release i+1. Candidate training
/// failures score 0; a final-training failure throws.
RunRecord run_cell(const Release& train_release, const Release& test_release,
                   int transition, Family learner, OptimizerKind optimizer,
                   Goal goal, int repeat, const ExperimentConfig& config);

/// The full repeats x learners x optimizers x goals x transitions sweep.
/// Records land in out_dir/results.csv as cells finish; an existing file is
/// loaded first and completed tuples are skipped.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

/// One treatment per optimizer (the repeat scores), ranked by Scott-Knott at
/// 95% confidence with the A12 >= 0.6 effect gate.
RankResult rank_transition(const std::vector<const RunRecord*>& records,
                           int repeats);

struct WinMatrix {
  std::vector<std::string> optimizers;
  // (learner, goal) -> optimizer -> first-rank count
  std::map<std::pair<std::string, std::string>, std::map<std::string, int>>
      counts;
  int total_transitions = 0;
};

WinMatrix aggregate(const std::vector<RunRecord>& records,
                    const ExperimentConfig& config);

/// Mean (tuning + final training) seconds per (optimizer, learner).
std::map<std::pair<std::string, std::string>, double> runtime_table(
    const std::vector<RunRecord>& records);

void write_results_csv(const std::vector<RunRecord>& records,
                       const std::string& path);
std::vector<RunRecord> read_results_csv(const std::string& path);

/// wins.csv, wins.txt, wins.svg and runtimes.csv under out_dir.
void write_reports(const std::vector<RunRecord>& records,
                   const ExperimentConfig& config, const std::string& out_dir);

}  // namespace hypercmp
