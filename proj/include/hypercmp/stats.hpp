#pragma once

#include <map>
#include <string>
#include <vector>

#include "hypercmp/rng.hpp"

namespace hypercmp {

struct TreatmentSamples {
  std::string name;
  std::vector<double> values;  // one score per repeat
};

/// Rank 1 = best; treatments in the same cluster share a rank.
struct RankResult {
  std::map<std::string, int> rank;
};

/// Vargha-Delaney effect size: probability that a random value of xs
/// exceeds a random value of ys, ties counted half. Rank-based, O(n log n).
double a12(const std::vector<double>& xs, const std::vector<double>& ys);

/// Two-sided bootstrap test on the difference of means. Samples are pooled,
/// resampled at the original sizes, and the observed |mean difference| is
/// compared against the resampled distribution.
bool bootstrap_significant(const std::vector<double>& xs,
                           const std::vector<double>& ys, int resamples,
                           double confidence, Rng& rng);

/// Scott-Knott clustering: sort by mean, recursively split where the
/// between-group sum of squared mean deviations is largest, accept a split
/// only when it is both significant (bootstrap) and non-trivial (a12 of the
/// better half against the worse half at or above the threshold).
RankResult scott_knott(const std::vector<TreatmentSamples>& treatments,
                       double confidence, double a12_threshold, Rng& rng,
                       int resamples = 512);

double mean_of(const std::vector<double>& v);
double median_of(std::vector<double> v);  // by value, sorts its copy

}  // namespace hypercmp
