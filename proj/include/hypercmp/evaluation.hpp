#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypercmp {

struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
};

enum class Goal { Precision, FMeasure };

inline std::string to_string(Goal g) {
  return g == Goal::Precision ? "precision" : "f_measure";
}

inline Goal goal_from_string(const std::string& s) {
  if (s == "precision") return Goal::Precision;
  if (s == "f_measure") return Goal::FMeasure;
  throw std::invalid_argument("unknown goal: " + s);
}

/// Positive class = defective (label 1).
inline ConfusionMatrix confusion(const std::vector<int>& predicted,
                                 const std::vector<int>& actual) {
  if (predicted.size() != actual.size() || predicted.empty())
    throw std::invalid_argument("confusion: length mismatch or empty");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) {
      actual[i] ? ++cm.tp : ++cm.fp;
    } else {
      actual[i] ? ++cm.fn : ++cm.tn;
    }
  }
  return cm;
}

/// tp/(tp+fp), 0 when no positive predictions were made.
inline double precision(const ConfusionMatrix& cm) {
  long denom = cm.tp + cm.fp;
  return denom == 0 ? 0.0 : static_cast<double>(cm.tp) / denom;
}

inline double recall(const ConfusionMatrix& cm) {
  long denom = cm.tp + cm.fn;
  return denom == 0 ? 0.0 : static_cast<double>(cm.tp) / denom;
}

/// Harmonic mean of precision and recall, 0 when both vanish.
inline double f_measure(const ConfusionMatrix& cm) {
  double p = precision(cm);
  double r = recall(cm);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

inline double goal_score(Goal g, const ConfusionMatrix& cm) {
  return g == Goal::Precision ? precision(cm) : f_measure(cm);
}

}  // namespace hypercmp
