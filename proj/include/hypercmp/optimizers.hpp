#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypercmp/models.hpp"
#include "hypercmp/param_space.hpp"
#include "hypercmp/rng.hpp"

namespace hypercmp {

enum class OptimizerKind { Default, Grid, Random, De, Smac };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

/// Counts evaluations of a score function (higher is better, in [0,1]).
class Objective {
 public:
  explicit Objective(std::function<double(const ParamSetting&)> fn)
      : fn_(std::move(fn)) {}

  double operator()(const ParamSetting& s) {
    ++evaluations_;
    return fn_(s);
  }

  long evaluations() const { return evaluations_; }

 private:
  std::function<double(const ParamSetting&)> fn_;
  long evaluations_ = 0;
};

struct Budget {
  int lives = 5;
  double max_wall_secs = 3600.0;
  int round_size = 10;
  double improvement_epsilon = 1e-4;
};

struct TuningResult {
  ParamSetting best_setting;
  double best_score = 0.0;
  long evaluations_used = 0;
  double wall_secs = 0.0;
  std::vector<std::pair<long, double>> trajectory;  // (eval index, best so far)
};

/// Yields batches of candidates for the budget loop. observe() feeds the
/// scores of the last batch back so stateful strategies can adapt.
class Proposer {
 public:
  virtual ~Proposer() = default;
  virtual std::optional<std::vector<ParamSetting>> next(Rng& rng) = 0;
  virtual void observe(const std::vector<ParamSetting>& batch,
                       const std::vector<double>& scores) {
    (void)batch;
    (void)scores;
  }
};

/// Shared budget controller. Per round: obtain a batch, evaluate it, update
/// the best; improvement beyond epsilon restores the full set of lives,
/// anything else costs one. Stops on zero lives, wall-clock exhaustion, or
/// proposer exhaustion. The wall clock is checked between evaluations so an
/// in-flight fit is never abandoned.
TuningResult run_budgeted(Proposer& proposer, Objective& objective,
                          const Budget& budget, Rng& rng);

class GridProposer : public Proposer {
 public:
  GridProposer(const ParamSpace& space, int points_per_numeric_dim,
               int round_size);
  std::optional<std::vector<ParamSetting>> next(Rng& rng) override;

 private:
  std::vector<ParamSetting> all_;
  std::size_t cursor_ = 0;
  int round_size_;
};

class RandomProposer : public Proposer {
 public:
  RandomProposer(const ParamSpace& space, int round_size)
      : space_(space), round_size_(round_size) {}
  std::optional<std::vector<ParamSetting>> next(Rng& rng) override;

 private:
  const ParamSpace& space_;
  int round_size_;
};

struct DeConfig {
  int np = 10;      // population size
  double f = 0.75;  // differential weight
  double cr = 0.3;  // crossover rate
};

/// One generation of DE/rand/1/bin over an entire scored population.
/// Trials replace their targets when they score at least as well.
std::vector<std::pair<ParamSetting, double>> de_step(
    const std::vector<std::pair<ParamSetting, double>>& population,
    const DeConfig& cfg, const ParamSpace& space, Objective& objective,
    Rng& rng);

class DeProposer : public Proposer {
 public:
  DeProposer(const ParamSpace& space, const DeConfig& cfg)
      : space_(space), cfg_(cfg) {
    if (cfg_.np < 4)
      throw std::invalid_argument("de population must have >= 4 members");
  }
  std::optional<std::vector<ParamSetting>> next(Rng& rng) override;
  void observe(const std::vector<ParamSetting>& batch,
               const std::vector<double>& scores) override;

 private:
  const ParamSpace& space_;
  DeConfig cfg_;
  std::vector<std::pair<ParamSetting, double>> population_;
  std::vector<int> pending_targets_;  // population slot per trial
  bool seeded_ = false;
};

struct SurrogateState {
  std::vector<std::vector<double>> encodings;
  std::vector<double> scores;
  int initial_design = 10;  // random settings before the surrogate kicks in
  int pool_size = 1000;     // candidate pool scored by expected improvement
  double xi = 0.01;         // exploration margin
  int n_trees = 50;
};

/// Sequential model-based proposal step: fit a random-forest regressor on
/// the (encoding, score) history, then return the round_size candidates
/// with the highest expected improvement out of a random pool. With too
/// little history the proposals are plain random samples.
std::vector<ParamSetting> smac_propose(SurrogateState& state,
                                       const ParamSpace& space, int round_size,
                                       Rng& rng);

/// EI for maximization; zero variance degenerates to max(0, mean - best - xi).
double expected_improvement(double mean, double variance, double best,
                            double xi);

class SmacProposer : public Proposer {
 public:
  SmacProposer(const ParamSpace& space, int round_size)
      : space_(space), round_size_(round_size) {}
  std::optional<std::vector<ParamSetting>> next(Rng& rng) override;
  void observe(const std::vector<ParamSetting>& batch,
               const std::vector<double>& scores) override;
  const SurrogateState& state() const { return state_; }

 private:
  const ParamSpace& space_;
  int round_size_;
  SurrogateState state_;
};

struct TuneOptions {
  int grid_points = 5;
  DeConfig de;
};

TuningResult tune(OptimizerKind kind, const ParamSpace& space,
                  Objective& objective, const Budget& budget, Rng& rng,
                  const TuneOptions& options = {});

}  // namespace hypercmp
