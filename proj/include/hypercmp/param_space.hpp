#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hypercmp/rng.hpp"

namespace hypercmp {

/// Sentinel for defaults like "None"/"auto" whose meaning is learner-specific.
struct Auto {
  friend bool operator==(const Auto&, const Auto&) { return true; }
};

using Value = std::variant<Auto, double, int, std::string>;

std::string value_to_string(const Value& v);

enum class DimKind { Categorical, Integer, Continuous };

struct ParamDim {
  std::string name;
  DimKind kind = DimKind::Continuous;
  double lo = 0.0;  // numeric kinds, inclusive on both ends
  double hi = 0.0;
  std::vector<std::string> values;  // categorical labels
  Value default_value;

  bool legal(const Value& v) const;
};

/// One concrete assignment of every dimension of a space.
struct ParamSetting {
  std::map<std::string, Value> values;

  bool has(std::string_view name) const;
  bool is_auto(std::string_view name) const;
  int get_int(std::string_view name) const;
  double get_double(std::string_view name) const;
  const std::string& get_cat(std::string_view name) const;

  bool operator==(const ParamSetting& other) const;
  std::string to_string() const;  // "name=value;name=value" in map order
};

/// An ordered list of tunable dimensions for one learner. Immutable after
/// construction; encoding depends on the dimension order.
class ParamSpace {
 public:
  ParamSpace(std::string learner, std::vector<ParamDim> dims);

  const std::string& learner() const { return learner_; }
  const std::vector<ParamDim>& dims() const { return dims_; }
  const ParamDim* find(std::string_view name) const;

  /// Throws std::invalid_argument when the setting does not assign exactly
  /// the dims of this space or a value is out of range.
  void validate(const ParamSetting& s) const;

 private:
  std::string learner_;
  std::vector<ParamDim> dims_;
};

ParamSetting default_setting(const ParamSpace& space);
ParamSetting sample(const ParamSpace& space, Rng& rng);

/// Cartesian product over per-dim value lists; numeric dims contribute
/// `points_per_numeric_dim` evenly spaced values (endpoints included,
/// integers deduplicated after rounding). First dim varies slowest.
std::vector<ParamSetting> grid(const ParamSpace& space,
                               int points_per_numeric_dim);

/// Numeric min-max scaling to [0,1]; categoricals map to index/(n-1).
/// Throws if the setting still carries an Auto sentinel.
std::vector<double> encode(const ParamSpace& space, const ParamSetting& s);

/// Inverse of encode for grid-representable settings (nearest legal value).
ParamSetting decode(const ParamSpace& space, const std::vector<double>& x);

// Built-in spaces mirroring the tuning ranges the harness explores.
const ParamSpace& cart_space();
const ParamSpace& rf_space();
const ParamSpace& knn_space();
const ParamSpace& svm_space();
const ParamSpace& builtin_space(std::string_view learner);

/// Space definition from a JSON array of
/// {name, kind, lo, hi, values, default} objects.
ParamSpace space_from_json_file(const std::string& path,
                                const std::string& learner);

}  // namespace hypercmp
