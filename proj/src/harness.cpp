#include "hypercmp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hypercmp {

namespace {

constexpr std::uint64_t kStatsSeed = 0x5CA770CULL;  // ranking-only stream

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (learners.empty() || optimizers.empty() || goals.empty())
    throw std::invalid_argument("learners, optimizers and goals must be non-empty");
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (budget.lives < 1 || budget.round_size < 1 || budget.max_wall_secs <= 0)
    throw std::invalid_argument("invalid budget");
  if (manifest_path.empty()) throw std::invalid_argument("manifest required");
}

RunRecord run_cell(const Release& train_release, const Release& test_release,
                   int transition, Family learner, OptimizerKind optimizer,
                   Goal goal, int repeat, const ExperimentConfig& config) {
  // One seed per (dataset, repeat): identical across learners and optimizers.
  std::uint64_t seed =
      hash_combine(config.master_seed, hash_str(train_release.project),
                   static_cast<std::uint64_t>(transition),
                   static_cast<std::uint64_t>(repeat));

  Rng split_rng(hash_combine(seed, hash_str("split")));
  SplitPair split = split_release(train_release, split_rng);

  const ParamSpace& space = builtin_space(to_string(learner));
  auto eval_counter = std::make_shared<long>(0);
  Objective objective([&, eval_counter](const ParamSetting& setting) {
    Rng candidate_rng(hash_combine(seed, hash_str("candidate"),
                                   static_cast<std::uint64_t>(++*eval_counter)));
    try {
      auto model = train(learner, split.tune_train, setting, candidate_rng);
      ConfusionMatrix cm =
          confusion(model->predict_all(split.tune_validate.x),
                    split.tune_validate.y);
      return goal_score(goal, cm);
    } catch (const std::exception&) {
      return 0.0;  // pathological candidates lose, they do not abort the run
    }
  });

  Rng tune_rng(hash_combine(seed, hash_str("tune")));
  TuneOptions options;
  options.grid_points = config.grid_points;
  TuningResult tuned =
      tune(optimizer, space, objective, config.budget, tune_rng, options);

  RunRecord record;
  record.project = train_release.project;
  record.transition = transition;
  record.learner = to_string(learner);
  record.optimizer = to_string(optimizer);
  record.goal = to_string(goal);
  record.repeat = repeat;
  record.evaluations = tuned.evaluations_used;
  record.tune_secs = tuned.wall_secs;
  record.best_setting = tuned.best_setting.to_string();

  auto start = std::chrono::steady_clock::now();
  Rng final_rng(hash_combine(seed, hash_str("final")));
  std::unique_ptr<Model> model;
  try {
    model = train(learner, train_release.instances, tuned.best_setting,
                  final_rng);
  } catch (const std::exception& e) {
    throw std::runtime_error("final training failed for " + record.project +
                             "/" + record.learner + ": " + e.what());
  }
  record.train_secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();

  ConfusionMatrix cm = confusion(model->predict_all(test_release.instances.x),
                                 test_release.instances.y);
  record.test_score = goal_score(goal, cm);
  return record;
}

namespace {

struct Cell {
  const Release* train;
  const Release* test;
  int transition;
  Family learner;
  OptimizerKind optimizer;
  Goal goal;
  int repeat;
};

std::string cell_key(const std::string& project, int transition,
                     const std::string& learner, const std::string& optimizer,
                     const std::string& goal, int repeat) {
  std::ostringstream os;
  os << project << '|' << transition << '|' << learner << '|' << optimizer
     << '|' << goal << '|' << repeat;
  return os.str();
}

const char* kResultsHeader =
    "project,transition,learner,optimizer,goal,repeat,test_score,tune_secs,"
    "train_secs,evaluations,best_setting";

std::string record_line(const RunRecord& r) {
  std::ostringstream os;
  os << r.project << ',' << r.transition << ',' << r.learner << ','
     << r.optimizer << ',' << r.goal << ',' << r.repeat << ','
     << format_double(r.test_score, 6) << ',' << format_double(r.tune_secs, 6)
     << ',' << format_double(r.train_secs, 6) << ',' << r.evaluations << ','
     << r.best_setting;
  return os.str();
}

}  // namespace

void write_results_csv(const std::vector<RunRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kResultsHeader << '\n';
  for (const auto& r : records) out << record_line(r) << '\n';
}

std::vector<RunRecord> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 11) continue;
    RunRecord r;
    r.project = fields[0];
    r.transition = std::stoi(fields[1]);
    r.learner = fields[2];
    r.optimizer = fields[3];
    r.goal = fields[4];
    r.repeat = std::stoi(fields[5]);
    r.test_score = std::stod(fields[6]);
    r.tune_secs = std::stod(fields[7]);
    r.train_secs = std::stod(fields[8]);
    r.evaluations = std::stol(fields[9]);
    r.best_setting = fields[10];
    // settings contain no commas, but keep any trailing fields joined
    for (std::size_t i = 11; i < fields.size(); ++i)
      r.best_setting += "," + fields[i];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ProjectSeries> corpus = load_manifest(config.manifest_path);
  std::filesystem::create_directories(config.out_dir);
  std::string results_path =
      (std::filesystem::path(config.out_dir) / "results.csv").string();

  // canonical cell order: transition, learner, optimizer, goal, repeat
  std::vector<Cell> cells;
  int transition = 0;
  for (const auto& series : corpus)
    for (const auto& [train_rel, test_rel] : transition_pairs(series)) {
      for (Family learner : config.learners)
        for (OptimizerKind optimizer : config.optimizers)
          for (Goal goal : config.goals)
            for (int repeat = 0; repeat < config.repeats; ++repeat)
              cells.push_back({train_rel, test_rel, transition, learner,
                               optimizer, goal, repeat});
      ++transition;
    }

  std::map<std::string, RunRecord> done;
  if (std::filesystem::exists(results_path))
    for (auto& r : read_results_csv(results_path))
      done.emplace(cell_key(r.project, r.transition, r.learner, r.optimizer,
                            r.goal, r.repeat),
                   std::move(r));

  std::vector<RunRecord> results(cells.size());
  std::vector<char> computed(cells.size(), 0);

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::condition_variable cv;
  std::vector<char> ready(cells.size(), 0);
  std::exception_ptr failure;

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      const Cell& c = cells[i];
      auto it = done.find(cell_key(c.train->project, c.transition,
                                   to_string(c.learner), to_string(c.optimizer),
                                   to_string(c.goal), c.repeat));
      try {
        if (it != done.end()) {
          results[i] = it->second;
        } else {
          results[i] = run_cell(*c.train, *c.test, c.transition, c.learner,
                                c.optimizer, c.goal, c.repeat, config);
          computed[i] = 1;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
      {
        std::lock_guard lock(mu);
        ready[i] = 1;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> threads;
  for (int w = 0; w < config.workers; ++w) threads.emplace_back(worker);

  // single appender keeps results.csv in canonical order regardless of
  // worker scheduling
  {
    std::ofstream out(results_path, std::ios::trunc);
    out << kResultsHeader << '\n';
    std::unique_lock lock(mu);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      cv.wait(lock, [&] { return ready[i] || failure; });
      if (failure) break;
      out << record_line(results[i]) << '\n';
      out.flush();
    }
  }

  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

RankResult rank_transition(const std::vector<const RunRecord*>& records,
                           int repeats) {
  std::map<std::string, TreatmentSamples> by_optimizer;
  int transition = records.empty() ? 0 : records.front()->transition;
  std::string learner = records.empty() ? "" : records.front()->learner;
  std::string goal = records.empty() ? "" : records.front()->goal;
  for (const auto* r : records) {
    auto& t = by_optimizer[r->optimizer];
    t.name = r->optimizer;
    t.values.push_back(r->test_score);
  }
  std::vector<TreatmentSamples> treatments;
  for (auto& [name, t] : by_optimizer) {
    if (static_cast<int>(t.values.size()) != repeats)
      throw std::invalid_argument("optimizer " + name + " has " +
                                  std::to_string(t.values.size()) +
                                  " repeats, expected " +
                                  std::to_string(repeats));
    treatments.push_back(std::move(t));
  }
  Rng stats_rng(hash_combine(kStatsSeed,
                             static_cast<std::uint64_t>(transition),
                             hash_str(learner), hash_str(goal)));
  return scott_knott(treatments, 0.95, 0.6, stats_rng);
}

WinMatrix aggregate(const std::vector<RunRecord>& records,
                    const ExperimentConfig& config) {
  WinMatrix wm;
  for (OptimizerKind k : config.optimizers)
    wm.optimizers.push_back(to_string(k));

  std::set<int> transitions;
  // (transition, learner, goal) -> records
  std::map<std::tuple<int, std::string, std::string>,
           std::vector<const RunRecord*>>
      groups;
  for (const auto& r : records) {
    transitions.insert(r.transition);
    groups[{r.transition, r.learner, r.goal}].push_back(&r);
  }
  wm.total_transitions = static_cast<int>(transitions.size());

  for (Family learner : config.learners)
    for (Goal goal : config.goals) {
      auto& row = wm.counts[{to_string(learner), to_string(goal)}];
      for (const auto& name : wm.optimizers) row[name] = 0;
    }

  for (const auto& [key, group] : groups) {
    RankResult ranks = rank_transition(group, config.repeats);
    auto& row = wm.counts[{std::get<1>(key), std::get<2>(key)}];
    for (const auto& [optimizer, rank] : ranks.rank)
      if (rank == 1) ++row[optimizer];
  }
  return wm;
}

std::map<std::pair<std::string, std::string>, double> runtime_table(
    const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records");
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
  for (const auto& r : records) {
    auto& slot = acc[{r.optimizer, r.learner}];
    slot.first += r.tune_secs + r.train_secs;
    slot.second += 1;
  }
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& [key, slot] : acc) out[key] = slot.first / slot.second;
  return out;
}

void write_reports(const std::vector<RunRecord>& records,
                   const ExperimentConfig& config,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  WinMatrix wm = aggregate(records, config);

  {
    std::ofstream out(fs::path(out_dir) / "wins.csv");
    out << "learner,goal,optimizer,wins,transitions,percent\n";
    for (const auto& [key, row] : wm.counts)
      for (const auto& name : wm.optimizers) {
        int wins = row.at(name);
        out << key.first << ',' << key.second << ',' << name << ',' << wins
            << ',' << wm.total_transitions << ','
            << format_double(wm.total_transitions
                                 ? 100.0 * wins / wm.total_transitions
                                 : 0.0,
                             1)
            << '\n';
      }
  }

  {
    std::ofstream out(fs::path(out_dir) / "wins.txt");
    out << "first-rank counts over " << wm.total_transitions
        << " transitions\n\n";
    out << "learner    goal      ";
    for (const auto& name : wm.optimizers)
      out << ' ' << name << std::string(name.size() < 8 ? 8 - name.size() : 1, ' ');
    out << '\n';
    for (const auto& [key, row] : wm.counts) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%-10s %-10s", key.first.c_str(),
                    key.second.c_str());
      out << buf;
      for (const auto& name : wm.optimizers) {
        std::snprintf(buf, sizeof(buf), " %-8d", row.at(name));
        out << buf;
      }
      out << '\n';
    }
  }

  {
    // cell darkness proportional to win percentage
    const int cell_w = 90, cell_h = 34, left = 170, top = 40;
    int n_rows = static_cast<int>(wm.counts.size());
    int n_cols = static_cast<int>(wm.optimizers.size());
    std::ofstream out(fs::path(out_dir) / "wins.svg");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << left + n_cols * cell_w + 20 << "\" height=\""
        << top + n_rows * cell_h + 20 << "\">\n";
    for (int c = 0; c < n_cols; ++c)
      out << "  <text x=\"" << left + c * cell_w + cell_w / 2
          << "\" y=\"25\" text-anchor=\"middle\" font-size=\"13\">"
          << wm.optimizers[c] << "</text>\n";
    int r = 0;
    for (const auto& [key, row] : wm.counts) {
      out << "  <text x=\"10\" y=\"" << top + r * cell_h + cell_h / 2 + 4
          << "\" font-size=\"13\">" << key.first << " / " << key.second
          << "</text>\n";
      for (int c = 0; c < n_cols; ++c) {
        double frac = wm.total_transitions
                          ? static_cast<double>(row.at(wm.optimizers[c])) /
                                wm.total_transitions
                          : 0.0;
        int shade = static_cast<int>(255 - 200 * frac);
        out << "  <rect x=\"" << left + c * cell_w << "\" y=\""
            << top + r * cell_h << "\" width=\"" << cell_w - 4
            << "\" height=\"" << cell_h - 4 << "\" fill=\"rgb(" << shade
            << ',' << shade << ',' << shade << ")\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << left + c * cell_w + (cell_w - 4) / 2
            << "\" y=\"" << top + r * cell_h + cell_h / 2 + 3
            << "\" text-anchor=\"middle\" font-size=\"12\" fill=\""
            << (frac > 0.5 ? "white" : "black") << "\">"
            << row.at(wm.optimizers[c]) << "</text>\n";
      }
      ++r;
    }
    out << "</svg>\n";
  }

  {
    auto table = runtime_table(records);
    std::set<std::string> learners;
    for (const auto& r : records) learners.insert(r.learner);
    std::ofstream out(fs::path(out_dir) / "runtimes.csv");
    out << "optimizer";
    for (const auto& l : learners) out << ',' << l;
    out << '\n';
    for (const auto& name : wm.optimizers) {
      out << name;
      for (const auto& l : learners) {
        auto it = table.find({name, l});
        out << ',' << (it == table.end() ? "" : format_double(it->second, 3));
      }
      out << '\n';
    }
  }
}

}  // namespace hypercmp
