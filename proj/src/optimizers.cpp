#include "hypercmp/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hypercmp {

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Default: return "default";
    case OptimizerKind::Grid: return "grid";
    case OptimizerKind::Random: return "random";
    case OptimizerKind::De: return "de";
    case OptimizerKind::Smac: return "smac";
  }
  return "?";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "default") return OptimizerKind::Default;
  if (s == "grid") return OptimizerKind::Grid;
  if (s == "random") return OptimizerKind::Random;
  if (s == "de") return OptimizerKind::De;
  if (s == "smac") return OptimizerKind::Smac;
  throw std::invalid_argument("unknown optimizer: " + s);
}

TuningResult run_budgeted(Proposer& proposer, Objective& objective,
                          const Budget& budget, Rng& rng) {
  if (budget.lives < 1 || budget.round_size < 1 || budget.max_wall_secs <= 0.0)
    throw std::invalid_argument("invalid budget");

  using Clock = std::chrono::steady_clock;
  auto start = Clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  TuningResult result;
  result.best_score = -std::numeric_limits<double>::infinity();
  long start_evals = objective.evaluations();
  int lives = budget.lives;
  bool have_baseline = false;
  bool first_batch = true;

  while (true) {
    auto batch = proposer.next(rng);
    if (!batch || batch->empty()) {
      if (first_batch)
        throw std::runtime_error("proposer yielded no candidates");
      break;
    }
    first_batch = false;

    double previous_best = result.best_score;
    double round_best = -std::numeric_limits<double>::infinity();
    std::vector<double> scores;
    bool timed_out = false;
    for (const auto& setting : *batch) {
      if (elapsed() > budget.max_wall_secs) {
        timed_out = true;
        break;
      }
      double score = objective(setting);
      scores.push_back(score);
      round_best = std::max(round_best, score);
      if (score > result.best_score) {
        result.best_score = score;
        result.best_setting = setting;
      }
      result.trajectory.emplace_back(objective.evaluations() - start_evals,
                                     result.best_score);
    }
    proposer.observe(*batch, scores);

    // The first scored round establishes the baseline; improvement is only
    // measured against a previously established best.
    bool improved = have_baseline &&
                    round_best > previous_best + budget.improvement_epsilon;
    if (!scores.empty()) have_baseline = true;
    lives = improved ? budget.lives : lives - 1;

    if (timed_out || lives <= 0) break;
  }

  result.evaluations_used = objective.evaluations() - start_evals;
  result.wall_secs = elapsed();
  return result;
}

GridProposer::GridProposer(const ParamSpace& space, int points_per_numeric_dim,
                           int round_size)
    : all_(grid(space, points_per_numeric_dim)), round_size_(round_size) {}

std::optional<std::vector<ParamSetting>> GridProposer::next(Rng& rng) {
  // visit in a shuffled order: when the budget truncates the walk, the
  // evaluated prefix still covers the whole lattice instead of one corner
  if (cursor_ == 0 && !all_.empty()) rng.shuffle(all_);
  if (cursor_ >= all_.size()) return std::nullopt;
  std::size_t end = std::min(all_.size(), cursor_ + round_size_);
  std::vector<ParamSetting> batch(all_.begin() + cursor_, all_.begin() + end);
  cursor_ = end;
  return batch;
}

std::optional<std::vector<ParamSetting>> RandomProposer::next(Rng& rng) {
  std::vector<ParamSetting> batch;
  batch.reserve(round_size_);
  for (int i = 0; i < round_size_; ++i) batch.push_back(sample(space_, rng));
  return batch;
}

namespace {

double categorical_index(const ParamDim& dim, const ParamSetting& s) {
  const auto& label = std::get<std::string>(s.values.at(dim.name));
  auto it = std::find(dim.values.begin(), dim.values.end(), label);
  return static_cast<double>(it - dim.values.begin());
}

/// DE/rand/1/bin trial for target slot i: each coordinate takes
/// a + f * (b - c) with probability cr (one coordinate forced), else the
/// target's value. Results are clipped back into the legal range.
ParamSetting de_trial(
    const std::vector<std::pair<ParamSetting, double>>& population,
    std::size_t target, const DeConfig& cfg, const ParamSpace& space,
    Rng& rng) {
  std::size_t np = population.size();
  std::size_t a, b, c;
  do {
    a = rng.index(np);
  } while (a == target);
  do {
    b = rng.index(np);
  } while (b == target || b == a);
  do {
    c = rng.index(np);
  } while (c == target || c == a || c == b);

  const ParamSetting& sa = population[a].first;
  const ParamSetting& sb = population[b].first;
  const ParamSetting& sc = population[c].first;
  const ParamSetting& sx = population[target].first;

  std::size_t forced = rng.index(space.dims().size());
  ParamSetting trial;
  for (std::size_t k = 0; k < space.dims().size(); ++k) {
    const ParamDim& dim = space.dims()[k];
    bool mutate = rng.uniform() < cfg.cr || k == forced;
    if (!mutate) {
      trial.values[dim.name] = sx.values.at(dim.name);
      continue;
    }
    switch (dim.kind) {
      case DimKind::Categorical: {
        double v = categorical_index(dim, sa) +
                   cfg.f * (categorical_index(dim, sb) -
                            categorical_index(dim, sc));
        long idx = std::clamp<long>(std::lround(v), 0,
                                    static_cast<long>(dim.values.size()) - 1);
        trial.values[dim.name] = dim.values[static_cast<std::size_t>(idx)];
        break;
      }
      case DimKind::Integer: {
        double v = sa.get_double(dim.name) +
                   cfg.f * (sb.get_double(dim.name) - sc.get_double(dim.name));
        v = std::clamp(v, dim.lo, dim.hi);
        trial.values[dim.name] = static_cast<int>(std::lround(v));
        break;
      }
      case DimKind::Continuous: {
        double v = sa.get_double(dim.name) +
                   cfg.f * (sb.get_double(dim.name) - sc.get_double(dim.name));
        trial.values[dim.name] = std::clamp(v, dim.lo, dim.hi);
        break;
      }
    }
  }
  return trial;
}

}  // namespace

std::vector<std::pair<ParamSetting, double>> de_step(
    const std::vector<std::pair<ParamSetting, double>>& population,
    const DeConfig& cfg, const ParamSpace& space, Objective& objective,
    Rng& rng) {
  if (population.size() < 4)
    throw std::invalid_argument("de_step: population must have >= 4 members");
  auto next_gen = population;
  for (std::size_t i = 0; i < population.size(); ++i) {
    ParamSetting trial = de_trial(population, i, cfg, space, rng);
    double score = objective(trial);
    if (score >= population[i].second) next_gen[i] = {trial, score};
  }
  return next_gen;
}

std::optional<std::vector<ParamSetting>> DeProposer::next(Rng& rng) {
  std::vector<ParamSetting> batch;
  if (!seeded_) {
    for (int i = 0; i < cfg_.np; ++i) batch.push_back(sample(space_, rng));
    pending_targets_.clear();
    return batch;
  }
  pending_targets_.clear();
  for (int i = 0; i < cfg_.np; ++i) {
    batch.push_back(de_trial(population_, i, cfg_, space_, rng));
    pending_targets_.push_back(i);
  }
  return batch;
}

void DeProposer::observe(const std::vector<ParamSetting>& batch,
                         const std::vector<double>& scores) {
  if (!seeded_) {
    population_.clear();
    for (std::size_t i = 0; i < scores.size(); ++i)
      population_.emplace_back(batch[i], scores[i]);
    seeded_ = true;
    return;
  }
  for (std::size_t t = 0; t < scores.size(); ++t) {
    auto& slot = population_[pending_targets_[t]];
    if (scores[t] >= slot.second) slot = {batch[t], scores[t]};
  }
}

double expected_improvement(double mean, double variance, double best,
                            double xi) {
  double margin = mean - best - xi;
  double sigma = std::sqrt(std::max(0.0, variance));
  if (sigma == 0.0) return std::max(0.0, margin);
  double z = margin / sigma;
  double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
  return std::max(0.0, margin * cdf + sigma * pdf);
}

std::vector<ParamSetting> smac_propose(SurrogateState& state,
                                       const ParamSpace& space, int round_size,
                                       Rng& rng) {
  if (static_cast<int>(state.scores.size()) < state.initial_design) {
    std::vector<ParamSetting> batch;
    for (int i = 0; i < round_size; ++i) batch.push_back(sample(space, rng));
    return batch;
  }

  ForestRegressor forest;
  forest.fit(state.encodings, state.scores, state.n_trees, rng);
  double best = *std::max_element(state.scores.begin(), state.scores.end());

  std::vector<ParamSetting> pool;
  std::vector<double> ei(state.pool_size);
  pool.reserve(state.pool_size);
  for (int i = 0; i < state.pool_size; ++i) {
    pool.push_back(sample(space, rng));
    auto stats = forest.predict_stats(encode(space, pool.back()));
    ei[i] = expected_improvement(stats.mean, stats.variance, best, state.xi);
  }

  std::vector<int> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ei[a] > ei[b]; });

  std::vector<ParamSetting> batch;
  for (int i = 0; i < round_size && i < static_cast<int>(order.size()); ++i)
    batch.push_back(pool[order[i]]);
  return batch;
}

std::optional<std::vector<ParamSetting>> SmacProposer::next(Rng& rng) {
  return smac_propose(state_, space_, round_size_, rng);
}

void SmacProposer::observe(const std::vector<ParamSetting>& batch,
                           const std::vector<double>& scores) {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    state_.encodings.push_back(encode(space_, batch[i]));
    state_.scores.push_back(scores[i]);
  }
}

TuningResult tune(OptimizerKind kind, const ParamSpace& space,
                  Objective& objective, const Budget& budget, Rng& rng,
                  const TuneOptions& options) {
  if (kind == OptimizerKind::Default) {
    using Clock = std::chrono::steady_clock;
    auto start = Clock::now();
    TuningResult result;
    result.best_setting = default_setting(space);
    result.best_score = objective(result.best_setting);
    result.evaluations_used = 1;
    result.trajectory.emplace_back(1, result.best_score);
    result.wall_secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  }

  switch (kind) {
    case OptimizerKind::Grid: {
      GridProposer p(space, options.grid_points, budget.round_size);
      return run_budgeted(p, objective, budget, rng);
    }
    case OptimizerKind::Random: {
      RandomProposer p(space, budget.round_size);
      return run_budgeted(p, objective, budget, rng);
    }
    case OptimizerKind::De: {
      DeConfig cfg = options.de;
      cfg.np = budget.round_size;
      DeProposer p(space, cfg);
      return run_budgeted(p, objective, budget, rng);
    }
    case OptimizerKind::Smac: {
      SmacProposer p(space, budget.round_size);
      return run_budgeted(p, objective, budget, rng);
    }
    default:
      throw std::invalid_argument("unknown optimizer kind");
  }
}

}  // namespace hypercmp
