#pragma once
// Continuous-to-binary conversion: cutoff search by marginal I-score and
// one-dimensional two-mean clustering. Binary coding is deliberate; finer
// discretizations trade away the robustness that makes partition scores
// useful in the first place.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "influence/common.hpp"
#include "influence/dataset.hpp"
#include "influence/score.hpp"

namespace influence {

namespace detail {

// Standardized I-score of the two-cell split (value > t) against y.
inline double binary_split_iscore(std::span<const double> col, std::span<const double> y,
                                  double t, double ybar, double s2) {
  std::int64_t n1 = 0;
  double sum1 = 0.0;
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (col[i] > t) {
      ++n1;
      sum1 += y[i];
    }
  }
  const std::int64_t n0 = static_cast<std::int64_t>(col.size()) - n1;
  double raw = 0.0;
  if (n1 > 0) {
    const double dev = sum1 / static_cast<double>(n1) - ybar;
    raw += static_cast<double>(n1) * static_cast<double>(n1) * dev * dev;
  }
  if (n0 > 0) {
    double sum0 = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) sum0 += y[i];
    sum0 -= sum1;
    const double dev = sum0 / static_cast<double>(n0) - ybar;
    raw += static_cast<double>(n0) * static_cast<double>(n0) * dev * dev;
  }
  return raw / (static_cast<double>(col.size()) * s2);
}

inline std::vector<double> distinct_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

// Midpoints of consecutive distinct values; for very dense columns, 256
// rank-evenly-spaced midpoints keep the sweep bounded.
inline std::vector<double> default_cutoff_candidates(std::span<const double> column) {
  auto vals = detail::distinct_sorted(std::vector<double>(column.begin(), column.end()));
  if (vals.size() < 2) throw DegenerateError("column is constant; no cutoff exists");
  std::vector<double> mids(vals.size() - 1);
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) mids[i] = 0.5 * (vals[i] + vals[i + 1]);
  constexpr std::size_t kMaxCandidates = 256;
  if (mids.size() <= kMaxCandidates) return mids;
  std::vector<double> picked;
  picked.reserve(kMaxCandidates);
  for (std::size_t i = 0; i < kMaxCandidates; ++i) {
    const std::size_t idx = (i * (mids.size() - 1)) / (kMaxCandidates - 1);
    picked.push_back(mids[idx]);
  }
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  return picked;
}

// Picks the threshold whose binary split has the largest marginal
// standardized I-score against the response. Ties go to the smaller
// threshold. `grid` overrides the default midpoint candidates.
inline double optimal_cutoff_by_iscore(const ContinuousDataset& ds, std::size_t column,
                                       std::span<const double> grid = {}) {
  if (column >= ds.p) throw std::invalid_argument("column index out of range");
  const auto col = ds.column(column);

  std::vector<double> candidates;
  if (grid.empty()) {
    candidates = default_cutoff_candidates(col);
  } else {
    candidates = detail::distinct_sorted(std::vector<double>(grid.begin(), grid.end()));
    auto vals = detail::distinct_sorted(col);
    if (vals.size() < 2) throw DegenerateError("column is constant; no cutoff exists");
  }

  double ysum = 0.0;
  for (double v : ds.y) ysum += v;
  const double ybar = ysum / static_cast<double>(ds.n);
  double ss = 0.0;
  for (double v : ds.y) ss += (v - ybar) * (v - ybar);
  const double s2 = ss / static_cast<double>(ds.n);
  if (s2 <= 0.0) throw DegenerateError("response is constant; the I-score normalizer is zero");

  double best_t = candidates.front();
  double best_score = -1.0;
  for (double t : candidates) {
    const double score = detail::binary_split_iscore(col, ds.y, t, ybar, s2);
    if (score > best_score) {
      best_score = score;
      best_t = t;
    }
  }
  return best_t;
}

// One-dimensional 2-means: Lloyd iterations on the sorted values, centers
// initialized at the min and max. Returns the midpoint of the final centers.
inline double two_mean_binarize(const ContinuousDataset& ds, std::size_t column) {
  if (column >= ds.p) throw std::invalid_argument("column index out of range");
  auto col = ds.column(column);
  std::sort(col.begin(), col.end());
  if (col.front() == col.back()) throw DegenerateError("column is constant; no cutoff exists");

  double c1 = col.front();
  double c2 = col.back();
  for (int iter = 0; iter < 1000; ++iter) {
    // On sorted data the assignment step is a cut at the center midpoint;
    // equidistant points go to the lower cluster.
    const double mid = 0.5 * (c1 + c2);
    const auto split = std::upper_bound(col.begin(), col.end(), mid);
    double s1 = 0.0, s2sum = 0.0;
    for (auto it = col.begin(); it != split; ++it) s1 += *it;
    for (auto it = split; it != col.end(); ++it) s2sum += *it;
    const auto k1 = static_cast<double>(split - col.begin());
    const auto k2 = static_cast<double>(col.end() - split);
    const double n1 = k1 > 0 ? s1 / k1 : c1;
    const double n2 = k2 > 0 ? s2sum / k2 : c2;
    if (n1 == c1 && n2 == c2) break;
    c1 = n1;
    c2 = n2;
  }
  return 0.5 * (c1 + c2);
}

enum class CutoffStrategy { median, iscore, two_means };

// Fits a full per-column rule. Constant columns get their constant as the
// threshold (all codes 0), keeping column indexing intact; downstream search
// treats them as droppable noise.
inline CutoffRule fit_cutoff_rule(const ContinuousDataset& ds, CutoffStrategy strategy) {
  CutoffRule rule;
  rule.names = ds.feature_names;
  rule.thresholds.resize(ds.p);
  for (std::size_t j = 0; j < ds.p; ++j) {
    auto col = ds.column(j);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    if (*mn == *mx) {
      rule.thresholds[j] = *mn;
      continue;
    }
    switch (strategy) {
      case CutoffStrategy::median: {
        std::sort(col.begin(), col.end());
        const std::size_t h = col.size() / 2;
        rule.thresholds[j] =
            col.size() % 2 == 1 ? col[h] : 0.5 * (col[h - 1] + col[h]);
        break;
      }
      case CutoffStrategy::iscore:
        rule.thresholds[j] = optimal_cutoff_by_iscore(ds, j);
        break;
      case CutoffStrategy::two_means:
        rule.thresholds[j] = two_mean_binarize(ds, j);
        break;
    }
  }
  return rule;
}

}  // namespace influence
