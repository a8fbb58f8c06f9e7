#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace hypercmp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic, platform-independent random source. All sampling in the
/// project goes through this class so that pinned seeds reproduce exactly
/// across compilers and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Warm up so that small seeds diverge immediately.
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on the inclusive range [lo, hi].
  int uniform_int(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(index(span));
  }

  /// Uniform index in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t index(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// FNV-1a, used to fold strings into seed material.
inline std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

template <typename... Rest>
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return hash_combine(hash_combine(a, b), static_cast<std::uint64_t>(rest)...);
}

}  // namespace hypercmp
