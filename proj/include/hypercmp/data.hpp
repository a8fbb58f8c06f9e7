#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hypercmp/learners.hpp"
#include "hypercmp/rng.hpp"

namespace hypercmp {

/// The static code metrics every dataset must carry, in schema order.
extern const std::array<const char*, 20> kMetricColumns;

/// Column names accepted as the defect count.
extern const std::array<const char*, 3> kDefectColumns;

struct Release {
  std::string project;
  std::string version;
  TrainSet instances;
};

struct ProjectSeries {
  std::string project;
  std::vector<Release> releases;  // chronological, at least three
};

struct SplitPair {
  TrainSet tune_train;     // 2/3 of release i
  TrainSet tune_validate;  // the other 1/3
};

/// Loads one release CSV. The header must contain all 20 metric columns and
/// a defect-count column; the count is binarized to label = (count > 0).
/// Throws std::runtime_error naming missing columns or bad rows.
Release load_release(const std::string& path);

void write_release(const Release& release, const std::string& path);

/// Uniform shuffle, then the first ceil(2n/3) rows train and the rest
/// validate.
SplitPair split_release(const Release& release, Rng& rng);

std::vector<std::pair<const Release*, const Release*>> transition_pairs(
    const ProjectSeries& series);

/// Manifest: JSON object {project name -> ordered list of CSV paths},
/// paths relative to the manifest's directory.
std::vector<ProjectSeries> load_manifest(const std::string& path);

}  // namespace hypercmp
