#pragma once

#include <cstdint>
#include <string>

namespace hypercmp {

/// Writes the bundled synthetic corpus into `dir`: two projects with three
/// releases each plus a fixtures.json manifest. "alpha" carries an easy
/// separable signal; "beta" hides its defective classes in tiny clusters
/// that defeat the default learner configurations but reward tuning.
/// Deterministic for a fixed seed. Returns the manifest path.
std::string write_fixture_corpus(const std::string& dir,
                                 std::uint64_t seed = 7);

}  // namespace hypercmp
