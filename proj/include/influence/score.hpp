#pragma once
// Partition statistics for variable subsets and the influence score (I-score)
// computed from them.
//
// For a subset X of discrete variables, observations sharing the same code
// tuple on X form one cell of the partition. With cell counts n_j and local
// response means m_j the raw score is
//
//     I_raw = sum_j n_j^2 (m_j - ybar)^2
//
// and the standardized score divides by n * s2 where s2 is the population
// variance of the response. Only occupied cells are materialized: an empty
// cell contributes nothing, and subsets of 10+ variables would otherwise
// enumerate far more cells than observations.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "influence/common.hpp"
#include "influence/dataset.hpp"

namespace influence {

struct Partition {
  struct Cell {
    std::int64_t count = 0;
    double mean = 0.0;
  };
  std::vector<std::int32_t> cell_of;  // observation -> compact cell id
  std::vector<Cell> cells;            // occupied cells, first-occurrence order
  std::vector<std::size_t> subset;
};

struct IScoreValue {
  double raw = 0.0;
  double standardized = 0.0;
  std::vector<std::size_t> subset;
  std::size_t n = 0;
  double s2 = 0.0;  // population variance used as normalizer
};

// Exact response mean and population variance (divisor n).
inline std::pair<double, double> global_stats(const DiscreteDataset& ds) {
  double sum = 0.0;
  for (double v : ds.y) sum += v;
  const double mean = sum / static_cast<double>(ds.n);
  double ss = 0.0;
  for (double v : ds.y) ss += (v - mean) * (v - mean);
  return {mean, ss / static_cast<double>(ds.n)};
}

namespace detail {

inline void validate_subset(const DiscreteDataset& ds, std::span<const std::size_t> subset) {
  if (subset.empty()) throw std::invalid_argument("variable subset is empty");
  std::vector<bool> seen(ds.p, false);
  for (std::size_t v : subset) {
    if (v >= ds.p)
      throw std::invalid_argument("variable index " + std::to_string(v) + " out of range (p=" +
                                  std::to_string(ds.p) + ")");
    if (seen[v]) throw std::invalid_argument("duplicate variable index " + std::to_string(v));
    seen[v] = true;
  }
}

struct VecHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int32_t c : v) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct CellStats {
  std::vector<std::int64_t> counts;
  std::vector<double> sums;
};

// How cells are keyed: dense table when the full level product is small,
// 64-bit mixed-radix keys while the product fits, full tuples otherwise.
inline constexpr std::uint64_t kDenseLimit = 1u << 16;

// Groups rows by their joint code tuple on `subset`. Cells appear in
// first-occurrence order; `cell_of_out`, when given, receives compact ids.
inline CellStats group_cells(const DiscreteDataset& ds, std::span<const std::size_t> subset,
                             std::vector<std::int32_t>* cell_of_out) {
  const std::size_t m = subset.size();
  std::uint64_t product = 1;
  bool fits64 = true;
  for (std::size_t v : subset) {
    const std::uint64_t lev = static_cast<std::uint64_t>(ds.levels[v]);
    if (product > (std::numeric_limits<std::uint64_t>::max() >> 1) / std::max<std::uint64_t>(lev, 1)) {
      fits64 = false;
      break;
    }
    product *= lev;
  }

  CellStats stats;
  if (cell_of_out) cell_of_out->assign(ds.n, -1);

  auto record = [&](std::size_t row, std::int32_t id) {
    if (id == static_cast<std::int32_t>(stats.counts.size())) {
      stats.counts.push_back(0);
      stats.sums.push_back(0.0);
    }
    stats.counts[id] += 1;
    stats.sums[id] += ds.y[row];
    if (cell_of_out) (*cell_of_out)[row] = id;
  };

  if (fits64 && product <= kDenseLimit) {
    std::vector<std::int32_t> id_of(product, -1);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < ds.n; ++i) {
      std::uint64_t key = 0;
      for (std::size_t v : subset)
        key = key * static_cast<std::uint64_t>(ds.levels[v]) +
              static_cast<std::uint64_t>(ds.code(i, v));
      std::int32_t& id = id_of[key];
      if (id < 0) id = next++;
      record(i, id);
    }
  } else if (fits64) {
    std::unordered_map<std::uint64_t, std::int32_t> id_of;
    id_of.reserve(ds.n * 2);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < ds.n; ++i) {
      std::uint64_t key = 0;
      for (std::size_t v : subset)
        key = key * static_cast<std::uint64_t>(ds.levels[v]) +
              static_cast<std::uint64_t>(ds.code(i, v));
      auto [it, inserted] = id_of.try_emplace(key, next);
      if (inserted) ++next;
      record(i, it->second);
    }
  } else {
    std::unordered_map<std::vector<std::int32_t>, std::int32_t, VecHash> id_of;
    id_of.reserve(ds.n * 2);
    std::int32_t next = 0;
    std::vector<std::int32_t> key(m);
    for (std::size_t i = 0; i < ds.n; ++i) {
      for (std::size_t k = 0; k < m; ++k) key[k] = ds.code(i, subset[k]);
      auto [it, inserted] = id_of.try_emplace(key, next);
      if (inserted) ++next;
      record(i, it->second);
    }
  }
  return stats;
}

}  // namespace detail

inline Partition make_partition(const DiscreteDataset& ds, std::span<const std::size_t> subset) {
  detail::validate_subset(ds, subset);
  Partition part;
  part.subset.assign(subset.begin(), subset.end());
  const auto stats = detail::group_cells(ds, subset, &part.cell_of);
  part.cells.resize(stats.counts.size());
  for (std::size_t j = 0; j < stats.counts.size(); ++j) {
    part.cells[j].count = stats.counts[j];
    part.cells[j].mean = stats.sums[j] / static_cast<double>(stats.counts[j]);
  }
  return part;
}

inline IScoreValue iscore(const DiscreteDataset& ds, std::span<const std::size_t> subset) {
  detail::validate_subset(ds, subset);
  const auto [ybar, s2] = global_stats(ds);
  if (s2 <= 0.0) throw DegenerateError("response is constant; the I-score normalizer is zero");

  const auto stats = detail::group_cells(ds, subset, nullptr);
  double raw = 0.0;
  for (std::size_t j = 0; j < stats.counts.size(); ++j) {
    const double cnt = static_cast<double>(stats.counts[j]);
    const double dev = stats.sums[j] / cnt - ybar;
    raw += cnt * cnt * dev * dev;
  }

  IScoreValue out;
  out.raw = raw;
  out.standardized = raw / (static_cast<double>(ds.n) * s2);
  out.subset.assign(subset.begin(), subset.end());
  out.n = ds.n;
  out.s2 = s2;
  return out;
}

inline nlohmann::json iscore_to_json(const IScoreValue& value,
                                     const std::vector<std::string>& feature_names) {
  nlohmann::json names = nlohmann::json::array();
  for (std::size_t v : value.subset) names.push_back(feature_names.at(v));
  return {{"subset", names},
          {"raw", value.raw},
          {"standardized", value.standardized},
          {"n", value.n}};
}

}  // namespace influence
