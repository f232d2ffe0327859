#pragma once
// Confusion counts, sensitivity/specificity, ROC construction and AUC.
// Thresholds sweep the unique score values; a row is predicted positive when
// its score is strictly greater than the threshold. Tied scores earn half
// credit, which the trapezoid through tied points realizes geometrically.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "influence/common.hpp"

namespace influence {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;
};

struct RocCurve {
  struct Point {
    double fpr = 0.0;  // 1 - specificity
    double tpr = 0.0;  // sensitivity
  };
  std::vector<Point> points;       // sorted, includes (0,0) and (1,1)
  std::vector<double> thresholds;  // unique score values, descending
};

namespace detail {

inline void check_binary_labels(std::span<const double> y) {
  for (double v : y)
    if (v != 0.0 && v != 1.0)
      throw DataError("labels must be 0/1; found " + fmt_double(v));
}

inline void check_both_classes(std::span<const double> y) {
  bool pos = false, neg = false;
  for (double v : y) (v == 1.0 ? pos : neg) = true;
  if (!pos || !neg) throw DegenerateError("labels contain a single class");
}

}  // namespace detail

inline ConfusionCounts confusion(std::span<const double> y, std::span<const double> scores,
                                 double threshold) {
  if (y.size() != scores.size()) throw std::invalid_argument("label/score length mismatch");
  detail::check_binary_labels(y);
  ConfusionCounts c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool predicted = scores[i] > threshold;
    if (y[i] == 1.0)
      (predicted ? c.tp : c.fn) += 1;
    else
      (predicted ? c.fp : c.tn) += 1;
  }
  return c;
}

inline double sensitivity(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) throw DegenerateError("sensitivity undefined: no positives");
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline double specificity(const ConfusionCounts& c) {
  if (c.tn + c.fp == 0) throw DegenerateError("specificity undefined: no negatives");
  return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

inline RocCurve roc_curve(std::span<const double> y, std::span<const double> scores) {
  if (y.size() != scores.size()) throw std::invalid_argument("label/score length mismatch");
  detail::check_binary_labels(y);
  detail::check_both_classes(y);

  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double positives = 0, negatives = 0;
  for (double v : y) (v == 1.0 ? positives : negatives) += 1;

  RocCurve curve;
  double tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]];
    // The point for threshold t counts rows with score strictly above t,
    // i.e. everything already swept.
    curve.thresholds.push_back(t);
    curve.points.push_back({fp / negatives, tp / positives});
    while (i < order.size() && scores[order[i]] == t) {
      (y[order[i]] == 1.0 ? tp : fp) += 1;
      ++i;
    }
  }
  curve.points.push_back({1.0, 1.0});
  return curve;
}

// Trapezoidal area under the ROC path. Equals the rank statistic
// P(score_pos > score_neg) + P(tie)/2.
inline double auc(std::span<const double> y, std::span<const double> scores) {
  const RocCurve curve = roc_curve(y, scores);
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    area += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  return area;
}

inline std::string roc_to_csv(const RocCurve& curve) {
  std::ostringstream out;
  out << "threshold,sensitivity,specificity\n";
  for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
    out << detail::fmt_double(curve.thresholds[k]) << ','
        << detail::fmt_double(curve.points[k].tpr) << ','
        << detail::fmt_double(1.0 - curve.points[k].fpr) << '\n';
  }
  return out.str();
}

}  // namespace influence
