#pragma once
// Seeded generators for the artificial benchmark models and pure-noise
// nulls, plus their closed-form targets.
//
// Streams are fully pinned so a (model, n, p, seed) tuple reproduces the same
// dataset byte for byte: an mt19937_64 is seeded with `seed`, and each row
// draws its p variable bits in column order (top bit of successive outputs),
// then one extra bit where the model needs a coin.

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "influence/common.hpp"
#include "influence/dataset.hpp"

namespace influence {

enum class SimModel { example1, example2, noise };

struct SimSpec {
  SimModel model = SimModel::noise;
  std::size_t n = 0;
  std::size_t p = 0;
  std::uint64_t seed = 0;
};

inline SimModel parse_model(const std::string& name) {
  if (name == "example1") return SimModel::example1;
  if (name == "example2") return SimModel::example2;
  if (name == "noise") return SimModel::noise;
  throw DataError("unknown simulation model \"" + name + "\"");
}

inline std::string model_name(SimModel m) {
  switch (m) {
    case SimModel::example1: return "example1";
    case SimModel::example2: return "example2";
    case SimModel::noise: return "noise";
  }
  return "?";
}

namespace detail {

inline int bit(std::mt19937_64& g) { return static_cast<int>(g() >> 63); }

inline void check_spec(const SimSpec& spec, std::size_t min_p) {
  if (spec.n < 2) throw std::invalid_argument("simulation needs n >= 2");
  if (spec.p < min_p)
    throw std::invalid_argument("model " + model_name(spec.model) + " needs p >= " +
                                std::to_string(min_p));
}

}  // namespace detail

// Two overlapping modules: all variables are fair coin flips, and each row's
// response is X1+X2 (mod 2) or X2+X3+X4 (mod 2), chosen by an independent
// per-row coin. No single variable has a marginal effect.
inline DiscreteDataset gen_example1(const SimSpec& spec) {
  if (spec.model != SimModel::example1) throw std::invalid_argument("spec.model mismatch");
  detail::check_spec(spec, 4);
  std::mt19937_64 rng(spec.seed);
  std::vector<std::int32_t> x(spec.n * spec.p);
  std::vector<double> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::int32_t* row = x.data() + i * spec.p;
    for (std::size_t j = 0; j < spec.p; ++j) row[j] = detail::bit(rng);
    const int coin = detail::bit(rng);
    y[i] = coin ? (row[0] + row[1]) % 2 : (row[1] + row[2] + row[3]) % 2;
  }
  return DiscreteDataset(spec.n, spec.p, std::move(x), std::move(y));
}

// Indicator/exponential model: Y = 1(X1*X2 / exp(X3*X4) > 0). The positive
// denominator never flips the sign, so Y reduces to the exact integer
// identity Y = X1*X2; a float-path reference generator in the tests must
// agree row for row.
inline DiscreteDataset gen_example2(const SimSpec& spec) {
  if (spec.model != SimModel::example2) throw std::invalid_argument("spec.model mismatch");
  detail::check_spec(spec, 4);
  std::mt19937_64 rng(spec.seed);
  std::vector<std::int32_t> x(spec.n * spec.p);
  std::vector<double> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::int32_t* row = x.data() + i * spec.p;
    for (std::size_t j = 0; j < spec.p; ++j) row[j] = detail::bit(rng);
    y[i] = row[0] * row[1];
  }
  return DiscreteDataset(spec.n, spec.p, std::move(x), std::move(y));
}

// Null model: response independent of every variable.
inline DiscreteDataset gen_noise(const SimSpec& spec) {
  if (spec.model != SimModel::noise) throw std::invalid_argument("spec.model mismatch");
  detail::check_spec(spec, 1);
  std::mt19937_64 rng(spec.seed);
  std::vector<std::int32_t> x(spec.n * spec.p);
  std::vector<double> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::int32_t* row = x.data() + i * spec.p;
    for (std::size_t j = 0; j < spec.p; ++j) row[j] = detail::bit(rng);
    y[i] = detail::bit(rng);
  }
  return DiscreteDataset(spec.n, spec.p, std::move(x), std::move(y));
}

inline DiscreteDataset generate(const SimSpec& spec) {
  switch (spec.model) {
    case SimModel::example1: return gen_example1(spec);
    case SimModel::example2: return gen_example2(spec);
    case SimModel::noise: return gen_noise(spec);
  }
  throw std::invalid_argument("unknown simulation model");
}

struct TheoreticalTargets {
  double bayes_rate = 0.0;
  std::vector<std::vector<std::size_t>> modules;  // 0-based variable indices
};

inline TheoreticalTargets theoretical_targets(SimModel model) {
  switch (model) {
    case SimModel::example1: return {0.75, {{0, 1}, {1, 2, 3}}};
    case SimModel::example2: return {1.0, {{0, 1}}};
    default: throw std::invalid_argument("no theoretical targets for this model");
  }
}

// Standard CSV export: feature columns then a "label" column.
inline void write_csv(const DiscreteDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write \"" + path + "\"");
  for (std::size_t j = 0; j < ds.p; ++j) out << ds.feature_names[j] << ',';
  out << "label\n";
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t j = 0; j < ds.p; ++j) out << ds.code(i, j) << ',';
    out << detail::fmt_double(ds.y[i]) << '\n';
  }
}

inline void write_csv(const ContinuousDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write \"" + path + "\"");
  for (std::size_t j = 0; j < ds.p; ++j) out << ds.feature_names[j] << ',';
  out << "label\n";
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t j = 0; j < ds.p; ++j) out << detail::fmt_double(ds.at(i, j)) << ',';
    out << detail::fmt_double(ds.y[i]) << '\n';
  }
}

}  // namespace influence
