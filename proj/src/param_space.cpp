#include "hypercmp/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hypercmp {

std::string value_to_string(const Value& v) {
  struct Visitor {
    std::string operator()(const Auto&) const { return "auto"; }
    std::string operator()(double d) const {
      std::ostringstream os;
      os << d;
      return os.str();
    }
    std::string operator()(int i) const { return std::to_string(i); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

bool ParamDim::legal(const Value& v) const {
  // A dim's own declared default is legal even when it falls outside the
  // tuning range (the SVM coef0 default of 0.0 sits below its range).
  if (!std::holds_alternative<Auto>(default_value) && v == default_value)
    return true;
  switch (kind) {
    case DimKind::Categorical: {
      const auto* s = std::get_if<std::string>(&v);
      return s && std::find(values.begin(), values.end(), *s) != values.end();
    }
    case DimKind::Integer: {
      const auto* i = std::get_if<int>(&v);
      return i && *i >= lo && *i <= hi;
    }
    case DimKind::Continuous: {
      const auto* d = std::get_if<double>(&v);
      return d && *d >= lo && *d <= hi;
    }
  }
  return false;
}

bool ParamSetting::has(std::string_view name) const {
  return values.count(std::string(name)) > 0;
}

bool ParamSetting::is_auto(std::string_view name) const {
  return std::holds_alternative<Auto>(values.at(std::string(name)));
}

int ParamSetting::get_int(std::string_view name) const {
  return std::get<int>(values.at(std::string(name)));
}

double ParamSetting::get_double(std::string_view name) const {
  const Value& v = values.at(std::string(name));
  if (const auto* i = std::get_if<int>(&v)) return *i;
  return std::get<double>(v);
}

const std::string& ParamSetting::get_cat(std::string_view name) const {
  return std::get<std::string>(values.at(std::string(name)));
}

bool ParamSetting::operator==(const ParamSetting& other) const {
  return values == other.values;
}

std::string ParamSetting::to_string() const {
  std::string out;
  for (const auto& [name, value] : values) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += value_to_string(value);
  }
  return out;
}

ParamSpace::ParamSpace(std::string learner, std::vector<ParamDim> dims)
    : learner_(std::move(learner)), dims_(std::move(dims)) {
  std::set<std::string> seen;
  for (const auto& d : dims_) {
    if (!seen.insert(d.name).second)
      throw std::invalid_argument("duplicate dim name: " + d.name);
    if (d.kind == DimKind::Categorical) {
      if (d.values.empty())
        throw std::invalid_argument(d.name + ": empty categorical value list");
      std::set<std::string> vals(d.values.begin(), d.values.end());
      if (vals.size() != d.values.size())
        throw std::invalid_argument(d.name + ": duplicate categorical values");
    } else if (d.lo > d.hi) {
      throw std::invalid_argument(d.name + ": lo > hi");
    }
    if (!std::holds_alternative<Auto>(d.default_value) &&
        !d.legal(d.default_value))
      throw std::invalid_argument(d.name + ": illegal default");
  }
}

const ParamDim* ParamSpace::find(std::string_view name) const {
  for (const auto& d : dims_)
    if (d.name == name) return &d;
  return nullptr;
}

void ParamSpace::validate(const ParamSetting& s) const {
  if (s.values.size() != dims_.size())
    throw std::invalid_argument(learner_ + ": setting has " +
                                std::to_string(s.values.size()) +
                                " values, space has " +
                                std::to_string(dims_.size()) + " dims");
  for (const auto& d : dims_) {
    auto it = s.values.find(d.name);
    if (it == s.values.end())
      throw std::invalid_argument(learner_ + ": missing dim " + d.name);
    if (std::holds_alternative<Auto>(it->second)) continue;
    if (!d.legal(it->second))
      throw std::invalid_argument(learner_ + ": value out of range for " +
                                  d.name);
  }
}

ParamSetting default_setting(const ParamSpace& space) {
  ParamSetting s;
  for (const auto& d : space.dims()) s.values[d.name] = d.default_value;
  return s;
}

ParamSetting sample(const ParamSpace& space, Rng& rng) {
  ParamSetting s;
  for (const auto& d : space.dims()) {
    switch (d.kind) {
      case DimKind::Categorical:
        s.values[d.name] = d.values[rng.index(d.values.size())];
        break;
      case DimKind::Integer:
        s.values[d.name] =
            rng.uniform_int(static_cast<int>(d.lo), static_cast<int>(d.hi));
        break;
      case DimKind::Continuous:
        s.values[d.name] = rng.uniform(d.lo, d.hi);
        break;
    }
  }
  return s;
}

namespace {

std::vector<Value> dim_grid_values(const ParamDim& d, int k) {
  std::vector<Value> out;
  switch (d.kind) {
    case DimKind::Categorical:
      for (const auto& v : d.values) out.emplace_back(v);
      break;
    case DimKind::Integer: {
      std::vector<int> ints;
      for (int i = 0; i < k; ++i) {
        double t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
        int v = static_cast<int>(std::lround(d.lo + t * (d.hi - d.lo)));
        if (ints.empty() || ints.back() != v) ints.push_back(v);
      }
      for (int v : ints) out.emplace_back(v);
      break;
    }
    case DimKind::Continuous:
      for (int i = 0; i < k; ++i) {
        double t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
        out.emplace_back(d.lo + t * (d.hi - d.lo));
      }
      break;
  }
  return out;
}

}  // namespace

std::vector<ParamSetting> grid(const ParamSpace& space,
                               int points_per_numeric_dim) {
  if (points_per_numeric_dim < 2)
    throw std::invalid_argument("points_per_numeric_dim must be >= 2");
  std::vector<std::vector<Value>> axes;
  for (const auto& d : space.dims())
    axes.push_back(dim_grid_values(d, points_per_numeric_dim));

  std::vector<ParamSetting> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    ParamSetting s;
    for (std::size_t i = 0; i < axes.size(); ++i)
      s.values[space.dims()[i].name] = axes[i][idx[i]];
    out.push_back(std::move(s));
    // odometer increment, last dim fastest
    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::vector<double> encode(const ParamSpace& space, const ParamSetting& s) {
  space.validate(s);
  std::vector<double> x;
  x.reserve(space.dims().size());
  for (const auto& d : space.dims()) {
    const Value& v = s.values.at(d.name);
    if (std::holds_alternative<Auto>(v))
      throw std::invalid_argument("cannot encode unresolved auto for " +
                                  d.name);
    switch (d.kind) {
      case DimKind::Categorical: {
        const auto& label = std::get<std::string>(v);
        auto it = std::find(d.values.begin(), d.values.end(), label);
        std::size_t i = static_cast<std::size_t>(it - d.values.begin());
        x.push_back(d.values.size() == 1
                        ? 0.0
                        : static_cast<double>(i) / (d.values.size() - 1));
        break;
      }
      case DimKind::Integer:
        x.push_back(d.hi == d.lo ? 0.0
                                 : (std::get<int>(v) - d.lo) / (d.hi - d.lo));
        break;
      case DimKind::Continuous:
        x.push_back(d.hi == d.lo
                        ? 0.0
                        : (std::get<double>(v) - d.lo) / (d.hi - d.lo));
        break;
    }
  }
  return x;
}

ParamSetting decode(const ParamSpace& space, const std::vector<double>& x) {
  if (x.size() != space.dims().size())
    throw std::invalid_argument("encoding length mismatch");
  ParamSetting s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const ParamDim& d = space.dims()[i];
    double c = std::clamp(x[i], 0.0, 1.0);
    switch (d.kind) {
      case DimKind::Categorical: {
        std::size_t idx =
            d.values.size() == 1
                ? 0
                : static_cast<std::size_t>(std::lround(c * (d.values.size() - 1)));
        s.values[d.name] = d.values[idx];
        break;
      }
      case DimKind::Integer:
        s.values[d.name] =
            static_cast<int>(std::lround(d.lo + c * (d.hi - d.lo)));
        break;
      case DimKind::Continuous:
        s.values[d.name] = d.lo + c * (d.hi - d.lo);
        break;
    }
  }
  return s;
}

namespace {

ParamDim categorical(std::string name, std::vector<std::string> values,
                     Value def) {
  ParamDim d;
  d.name = std::move(name);
  d.kind = DimKind::Categorical;
  d.values = std::move(values);
  d.default_value = std::move(def);
  return d;
}

ParamDim integer(std::string name, int lo, int hi, Value def) {
  ParamDim d;
  d.name = std::move(name);
  d.kind = DimKind::Integer;
  d.lo = lo;
  d.hi = hi;
  d.default_value = std::move(def);
  return d;
}

ParamDim continuous(std::string name, double lo, double hi, Value def) {
  ParamDim d;
  d.name = std::move(name);
  d.kind = DimKind::Continuous;
  d.lo = lo;
  d.hi = hi;
  d.default_value = std::move(def);
  return d;
}

}  // namespace

const ParamSpace& cart_space() {
  static const ParamSpace space{
      "cart",
      {categorical("criterion", {"gini", "entropy"}, std::string("gini")),
       continuous("max_features", 0.1, 1.0, Auto{}),
       integer("min_samples_split", 2, 30, 2),
       integer("min_samples_leaf", 1, 21, 1),
       integer("max_depth", 1, 21, Auto{})}};
  return space;
}

const ParamSpace& rf_space() {
  static const ParamSpace space{
      "rf",
      {categorical("criterion", {"gini", "entropy"}, std::string("entropy")),
       continuous("max_features", 0.1, 1.0, Auto{}),
       integer("min_samples_split", 2, 30, 2),
       integer("min_samples_leaf", 1, 21, 1),
       integer("n_estimators", 10, 100, 10)}};
  return space;
}

const ParamSpace& knn_space() {
  static const ParamSpace space{
      "knn",
      {integer("n_neighbors", 2, 10, 5),
       categorical("weights", {"uniform", "distance"},
                   std::string("uniform"))}};
  return space;
}

const ParamSpace& svm_space() {
  // Note: the published tuning range for coef0 does not contain its own
  // default of 0.0; both are kept verbatim.
  static const ParamSpace space{
      "svm",
      {continuous("C", 1.0, 100.0, 1.0),
       categorical("kernel", {"rbf", "sigmoid"}, std::string("rbf")),
       continuous("coef0", 0.1, 1.0, 0.0),
       continuous("gamma", 0.1, 1.0, Auto{})}};
  return space;
}

const ParamSpace& builtin_space(std::string_view learner) {
  if (learner == "cart") return cart_space();
  if (learner == "rf") return rf_space();
  if (learner == "knn") return knn_space();
  if (learner == "svm") return svm_space();
  throw std::invalid_argument("unknown learner: " + std::string(learner));
}

ParamSpace space_from_json_file(const std::string& path,
                                const std::string& learner) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open space file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<ParamDim> dims;
  for (const auto& obj : doc) {
    ParamDim d;
    d.name = obj.at("name").get<std::string>();
    std::string kind = obj.at("kind").get<std::string>();
    if (kind == "categorical") {
      d.kind = DimKind::Categorical;
      d.values = obj.at("values").get<std::vector<std::string>>();
      if (obj.contains("default"))
        d.default_value = obj.at("default").get<std::string>();
      else
        d.default_value = Auto{};
    } else if (kind == "integer" || kind == "continuous") {
      d.kind = kind == "integer" ? DimKind::Integer : DimKind::Continuous;
      d.lo = obj.at("lo").get<double>();
      d.hi = obj.at("hi").get<double>();
      if (!obj.contains("default") || obj.at("default").is_null())
        d.default_value = Auto{};
      else if (d.kind == DimKind::Integer)
        d.default_value = obj.at("default").get<int>();
      else
        d.default_value = obj.at("default").get<double>();
    } else {
      throw std::runtime_error("unknown dim kind: " + kind);
    }
    dims.push_back(std::move(d));
  }
  return ParamSpace(learner, std::move(dims));
}

}  // namespace hypercmp
