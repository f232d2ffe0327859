#pragma once
// Tabular datasets: continuous matrices as ingested from CSV, their
// level-coded discrete counterparts, and the per-column cutoff rules that
// map one onto the other.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "influence/common.hpp"

namespace influence {

// Level codes are small non-negative integers; anything this large coming in
// from a file is almost certainly continuous data used by mistake.
inline constexpr std::int32_t kMaxLevelCode = 1 << 20;

struct ContinuousDataset {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<double> values;  // row-major, n*p
  std::vector<double> y;
  std::vector<std::string> feature_names;

  ContinuousDataset() = default;
  ContinuousDataset(std::size_t n_obs, std::size_t n_vars, std::vector<double> vals,
                    std::vector<double> response, std::vector<std::string> names = {})
      : n(n_obs), p(n_vars), values(std::move(vals)), y(std::move(response)),
        feature_names(std::move(names)) {
    validate();
  }

  double at(std::size_t i, std::size_t j) const { return values[i * p + j]; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i, j);
    return out;
  }

 private:
  void validate();
};

struct DiscreteDataset {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<std::int32_t> x;  // row-major, n*p
  std::vector<double> y;
  std::vector<std::string> feature_names;
  std::vector<std::int32_t> levels;  // declared level count per column

  DiscreteDataset() = default;
  DiscreteDataset(std::size_t n_obs, std::size_t n_vars, std::vector<std::int32_t> codes,
                  std::vector<double> response, std::vector<std::string> names = {})
      : n(n_obs), p(n_vars), x(std::move(codes)), y(std::move(response)),
        feature_names(std::move(names)) {
    validate();
  }

  std::int32_t code(std::size_t i, std::size_t j) const { return x[i * p + j]; }

  // A column collapsed to a single code carries no partition information; it
  // is kept (column indexing stays stable) but callers may want to know.
  bool is_degenerate_column(std::size_t j) const {
    for (std::size_t i = 1; i < n; ++i)
      if (code(i, j) != code(0, j)) return false;
    return true;
  }

 private:
  void validate();
};

struct CutoffRule {
  std::vector<std::string> names;
  std::vector<double> thresholds;  // code 1 assigned when value > threshold

  double threshold_for(const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return thresholds[k];
    throw DataError("cutoff rule has no threshold for column \"" + name + "\"");
  }
};

namespace detail {

inline std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> names(p);
  for (std::size_t j = 0; j < p; ++j) names[j] = "f" + std::to_string(j + 1);
  return names;
}

inline void check_names_unique(const std::vector<std::string>& names) {
  std::unordered_set<std::string> seen;
  for (const auto& name : names)
    if (!seen.insert(name).second)
      throw std::invalid_argument("duplicate feature name \"" + name + "\"");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = (b == std::string::npos) ? std::string{} : f.substr(b, e - b + 1);
  }
  return fields;
}

inline bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;  // from_chars rejects an explicit plus sign
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e && std::isfinite(out);
}

}  // namespace detail

inline void ContinuousDataset::validate() {
  if (n < 2) throw std::invalid_argument("dataset needs at least 2 observations");
  if (p < 1) throw std::invalid_argument("dataset needs at least 1 variable");
  if (values.size() != n * p) throw std::invalid_argument("value matrix size mismatch");
  if (y.size() != n) throw std::invalid_argument("response length mismatch");
  if (feature_names.empty()) feature_names = detail::default_names(p);
  if (feature_names.size() != p) throw std::invalid_argument("feature name count mismatch");
  detail::check_names_unique(feature_names);
  for (double v : values)
    if (!std::isfinite(v)) throw DataError("non-finite value in feature matrix");
  for (double v : y)
    if (!std::isfinite(v)) throw DataError("non-finite value in response");
}

inline void DiscreteDataset::validate() {
  if (n < 2) throw std::invalid_argument("dataset needs at least 2 observations");
  if (p < 1) throw std::invalid_argument("dataset needs at least 1 variable");
  if (x.size() != n * p) throw std::invalid_argument("code matrix size mismatch");
  if (y.size() != n) throw std::invalid_argument("response length mismatch");
  if (feature_names.empty()) feature_names = detail::default_names(p);
  if (feature_names.size() != p) throw std::invalid_argument("feature name count mismatch");
  detail::check_names_unique(feature_names);
  for (double v : y)
    if (!std::isfinite(v)) throw DataError("non-finite value in response");
  levels.assign(p, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const std::int32_t c = code(i, j);
      if (c < 0) throw DataError("negative level code in column \"" + feature_names[j] + "\"");
      if (c >= kMaxLevelCode)
        throw DataError("level code too large in column \"" + feature_names[j] +
                        "\"; data looks continuous");
      levels[j] = std::max(levels[j], c + 1);
    }
  }
}

// Reads a UTF-8, comma-separated file with one header row. The label column
// is selected by name; every other column must be numeric.
inline ContinuousDataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open \"" + path + "\"");

  std::string line;
  if (!std::getline(in, line)) throw DataError("\"" + path + "\" is empty");
  const auto header = detail::split_csv_line(line);

  std::size_t label_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == label_column) label_idx = j;
  if (label_idx == header.size())
    throw DataError("\"" + path + "\" has no column named \"" + label_column + "\"");

  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != label_idx) names.push_back(header[j]);
  if (names.empty()) throw DataError("\"" + path + "\" has no feature columns");

  std::vector<double> values;
  std::vector<double> y;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw DataError("\"" + path + "\" row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v;
      if (!detail::parse_real(fields[j], v))
        throw DataError("\"" + path + "\" row " + std::to_string(row) + ", column \"" +
                        header[j] + "\": cannot parse \"" + fields[j] + "\" as a number");
      if (j == label_idx)
        y.push_back(v);
      else
        values.push_back(v);
    }
  }
  if (row < 2)
    throw DataError("\"" + path + "\" has " + std::to_string(row) + " data rows; need at least 2");

  const std::size_t p = names.size();
  return ContinuousDataset(row, p, std::move(values), std::move(y), std::move(names));
}

// Thresholds every column: code 1 when value > threshold, 0 otherwise (ties
// fall to code 0). The rule is matched to columns by name.
inline DiscreteDataset binarize_by_cutoff(const ContinuousDataset& ds, const CutoffRule& rule) {
  if (rule.names.size() != rule.thresholds.size())
    throw std::invalid_argument("cutoff rule name/threshold length mismatch");
  std::vector<double> t(ds.p);
  for (std::size_t j = 0; j < ds.p; ++j) {
    t[j] = rule.threshold_for(ds.feature_names[j]);
    if (!std::isfinite(t[j]))
      throw DataError("non-finite threshold for column \"" + ds.feature_names[j] + "\"");
  }
  std::vector<std::int32_t> codes(ds.n * ds.p);
  for (std::size_t i = 0; i < ds.n; ++i)
    for (std::size_t j = 0; j < ds.p; ++j)
      codes[i * ds.p + j] = ds.at(i, j) > t[j] ? 1 : 0;
  return DiscreteDataset(ds.n, ds.p, std::move(codes), ds.y, ds.feature_names);
}

// Interprets an already-discrete continuous matrix (e.g. a CSV of codes) as
// a DiscreteDataset. Every value must be a non-negative small integer.
inline DiscreteDataset to_discrete(const ContinuousDataset& ds) {
  std::vector<std::int32_t> codes(ds.n * ds.p);
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t j = 0; j < ds.p; ++j) {
      const double v = ds.at(i, j);
      if (v < 0 || v >= kMaxLevelCode || v != std::floor(v))
        throw DataError("column \"" + ds.feature_names[j] + "\" row " + std::to_string(i + 1) +
                        " holds " + detail::fmt_double(v) +
                        ", not a small non-negative integer code; discretize first");
      codes[i * ds.p + j] = static_cast<std::int32_t>(v);
    }
  }
  return DiscreteDataset(ds.n, ds.p, std::move(codes), ds.y, ds.feature_names);
}

inline nlohmann::json cutoff_rule_to_json(const CutoffRule& rule) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t k = 0; k < rule.names.size(); ++k)
    arr.push_back({{"name", rule.names[k]}, {"threshold", rule.thresholds[k]}});
  return arr;
}

inline CutoffRule cutoff_rule_from_json(const nlohmann::json& j) {
  CutoffRule rule;
  if (!j.is_array()) throw DataError("cutoff rule JSON must be an array of {name, threshold}");
  for (const auto& entry : j) {
    rule.names.push_back(entry.at("name").get<std::string>());
    rule.thresholds.push_back(entry.at("threshold").get<double>());
  }
  return rule;
}

}  // namespace influence
