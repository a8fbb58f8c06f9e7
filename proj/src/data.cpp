#include "hypercmp/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hypercmp {

const std::array<const char*, 20> kMetricColumns = {
    "wmc", "dit",  "noc", "cbo", "rfc",    "lcom", "ca",
    "ce",  "npm",  "lcom3", "loc", "dam",  "moa",  "mfa",
    "cam", "ic",   "cbm", "amc", "max_cc", "avg_cc"};

const std::array<const char*, 3> kDefectColumns = {"bug", "bugs", "defects"};

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

Release load_release(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line) || line.empty())
    throw std::runtime_error(path + ": empty file");
  std::vector<std::string> header = split_csv_line(line);

  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };

  std::vector<int> metric_idx;
  std::vector<std::string> missing;
  for (const char* name : kMetricColumns) {
    int idx = column(name);
    if (idx < 0)
      missing.emplace_back(name);
    else
      metric_idx.push_back(idx);
  }
  if (!missing.empty()) {
    std::string msg = path + ": missing metric columns:";
    for (const auto& m : missing) msg += " " + m;
    throw std::runtime_error(msg);
  }

  int defect_idx = -1;
  for (const char* name : kDefectColumns)
    if ((defect_idx = column(name)) >= 0) break;
  if (defect_idx < 0)
    throw std::runtime_error(path + ": no defect-count column (bug/bugs/defects)");

  Release release;
  std::filesystem::path p(path);
  release.version = p.stem().string();
  release.project = p.parent_path().filename().string();

  std::vector<std::string> bad_rows;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() < header.size()) {
      bad_rows.push_back(std::to_string(row));
      continue;
    }
    std::vector<double> features(metric_idx.size());
    bool ok = true;
    for (std::size_t j = 0; j < metric_idx.size(); ++j)
      if (!parse_double(fields[metric_idx[j]], features[j])) {
        ok = false;
        break;
      }
    double count = 0.0;
    ok = ok && parse_double(fields[defect_idx], count);
    if (!ok) {
      bad_rows.push_back(std::to_string(row));
      continue;
    }
    release.instances.x.push_back(std::move(features));
    release.instances.y.push_back(count > 0.0 ? 1 : 0);
  }
  if (!bad_rows.empty()) {
    std::string msg = path + ": unparseable rows:";
    for (const auto& r : bad_rows) msg += " " + r;
    throw std::runtime_error(msg);
  }
  if (release.instances.x.empty())
    throw std::runtime_error(path + ": no data rows");
  return release;
}

void write_release(const Release& release, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t j = 0; j < kMetricColumns.size(); ++j)
    out << kMetricColumns[j] << ',';
  out << "bug\n";
  out.precision(17);
  for (std::size_t i = 0; i < release.instances.size(); ++i) {
    for (double v : release.instances.x[i]) out << v << ',';
    out << release.instances.y[i] << '\n';
  }
}

SplitPair split_release(const Release& release, Rng& rng) {
  std::size_t n = release.instances.size();
  if (n < 3)
    throw std::invalid_argument(release.project + "/" + release.version +
                                ": need at least 3 instances to split");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::size_t n_train = (2 * n + 2) / 3;  // ceil(2n/3)
  SplitPair split;
  for (std::size_t i = 0; i < n; ++i) {
    TrainSet& dst = i < n_train ? split.tune_train : split.tune_validate;
    dst.x.push_back(release.instances.x[order[i]]);
    dst.y.push_back(release.instances.y[order[i]]);
  }
  return split;
}

std::vector<std::pair<const Release*, const Release*>> transition_pairs(
    const ProjectSeries& series) {
  std::vector<std::pair<const Release*, const Release*>> pairs;
  for (std::size_t i = 0; i + 1 < series.releases.size(); ++i)
    pairs.emplace_back(&series.releases[i], &series.releases[i + 1]);
  return pairs;
}

std::vector<ProjectSeries> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<ProjectSeries> corpus;
  for (const auto& [project, files] : doc.items()) {
    ProjectSeries series;
    series.project = project;
    for (const auto& file : files) {
      std::filesystem::path rel(file.get<std::string>());
      Release r = load_release(rel.is_absolute() ? rel.string()
                                                 : (base / rel).string());
      r.project = project;
      series.releases.push_back(std::move(r));
    }
    if (series.releases.size() < 3)
      throw std::runtime_error(project + ": a project needs >= 3 releases");
    corpus.push_back(std::move(series));
  }
  std::sort(corpus.begin(), corpus.end(),
            [](const ProjectSeries& a, const ProjectSeries& b) {
              return a.project < b.project;
            });
  return corpus;
}

}  // namespace hypercmp
