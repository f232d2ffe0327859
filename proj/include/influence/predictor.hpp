#pragma once
// Predictors built from variable modules: the cell-mean classifier, score-
// weighted module combination, a plain full-batch logistic baseline, and the
// predictivity parameter theta_c.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "influence/common.hpp"
#include "influence/dataset.hpp"
#include "influence/score.hpp"

namespace influence {

// Predicts the training local mean of the cell a row falls into; rows whose
// tuple was never seen in training get the global training mean.
struct ModuleClassifier {
  std::vector<std::size_t> module;  // sorted variable indices
  std::map<std::vector<std::int32_t>, double> cell_table;
  double fallback = 0.0;
  std::vector<std::int32_t> levels;  // declared level range per module variable
};

struct LogisticModel {
  std::vector<double> weights;  // original (unstandardized) input scale
  double bias = 0.0;
  std::size_t epochs = 0;
  double step = 0.0;
  double final_loss = 0.0;
  bool underdetermined = false;  // n < d
};

struct PredictivityEstimate {
  double theta_c = 0.0;
  std::map<std::vector<std::int32_t>, double> case_dist;     // p_Xd
  std::map<std::vector<std::int32_t>, double> control_dist;  // p_Xu
};

inline ModuleClassifier fit_module_classifier(const DiscreteDataset& ds,
                                              std::span<const std::size_t> module) {
  detail::validate_subset(ds, module);
  for (double v : ds.y)
    if (v < 0.0 || v > 1.0)
      throw DataError("module classifier expects responses in [0, 1]");

  ModuleClassifier mc;
  mc.module.assign(module.begin(), module.end());
  std::sort(mc.module.begin(), mc.module.end());
  mc.levels.reserve(mc.module.size());
  for (std::size_t v : mc.module) mc.levels.push_back(ds.levels[v]);

  const auto part = make_partition(ds, mc.module);
  std::vector<std::int32_t> key(mc.module.size());
  std::vector<bool> stored(part.cells.size(), false);
  for (std::size_t i = 0; i < ds.n; ++i) {
    const auto id = static_cast<std::size_t>(part.cell_of[i]);
    if (stored[id]) continue;
    for (std::size_t q = 0; q < mc.module.size(); ++q) key[q] = ds.code(i, mc.module[q]);
    mc.cell_table.emplace(key, part.cells[id].mean);
    stored[id] = true;
  }
  const auto [ybar, s2] = global_stats(ds);
  (void)s2;
  mc.fallback = ybar;
  return mc;
}

inline std::vector<double> predict(const ModuleClassifier& mc, const DiscreteDataset& rows) {
  for (std::size_t v : mc.module)
    if (v >= rows.p) throw std::invalid_argument("module variable index out of range for rows");
  std::vector<double> out(rows.n);
  std::vector<std::int32_t> key(mc.module.size());
  for (std::size_t i = 0; i < rows.n; ++i) {
    for (std::size_t q = 0; q < mc.module.size(); ++q) {
      const std::int32_t c = rows.code(i, mc.module[q]);
      if (c < 0 || c >= mc.levels[q])
        throw DataError("row " + std::to_string(i + 1) + ": code " + std::to_string(c) +
                        " outside declared level range [0, " + std::to_string(mc.levels[q]) +
                        ") for variable " + rows.feature_names[mc.module[q]]);
      key[q] = c;
    }
    const auto it = mc.cell_table.find(key);
    out[i] = it == mc.cell_table.end() ? mc.fallback : it->second;
  }
  return out;
}

// Score-weighted posterior average over several module classifiers.
inline std::vector<double> combine_modules(
    const std::vector<std::pair<ModuleClassifier, double>>& weighted,
    const DiscreteDataset& rows) {
  if (weighted.empty()) throw std::invalid_argument("no module classifiers to combine");
  double total = 0.0;
  for (const auto& [mc, w] : weighted) {
    if (w < 0.0) throw std::invalid_argument("module weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("module weights are all zero");

  std::vector<double> out(rows.n, 0.0);
  for (const auto& [mc, w] : weighted) {
    const auto scores = predict(mc, rows);
    for (std::size_t i = 0; i < rows.n; ++i) out[i] += w * scores[i];
  }
  for (double& v : out) v /= total;
  return out;
}

namespace detail {

// Mean cross-entropy and its gradient at (w, b) on the given matrix. Used by
// the trainer every epoch; exposed so tests can finite-difference it.
inline double logistic_loss_grad(std::span<const double> x, std::size_t n, std::size_t d,
                                 std::span<const double> y, std::span<const double> w, double b,
                                 std::span<double> grad_w, double& grad_b) {
  double loss = 0.0;
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = b;
    const double* row = x.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
    const double prob = 1.0 / (1.0 + std::exp(-z));
    const double clipped = std::clamp(prob, 1e-12, 1.0 - 1e-12);
    loss -= y[i] * std::log(clipped) + (1.0 - y[i]) * std::log(1.0 - clipped);
    const double delta = prob - y[i];
    for (std::size_t j = 0; j < d; ++j) grad_w[j] += delta * row[j];
    grad_b += delta;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  for (double& g : grad_w) g *= inv_n;
  grad_b *= inv_n;
  return loss;
}

}  // namespace detail

// Full-batch gradient descent on mean cross-entropy. Inputs are standardized
// to zero mean / unit variance internally (constant columns skipped); the
// returned weights are folded back to the original input scale. Zero
// initialization keeps the fit deterministic.
inline LogisticModel fit_logistic(std::span<const double> x, std::size_t n, std::size_t d,
                                  std::span<const double> y, std::size_t epochs = 500,
                                  double step = 0.5) {
  if (n < 1 || d < 1) throw std::invalid_argument("empty design matrix");
  if (x.size() != n * d) throw std::invalid_argument("design matrix size mismatch");
  if (y.size() != n) throw std::invalid_argument("label length mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw DataError("non-finite value in logistic inputs");
  for (double v : y)
    if (v != 0.0 && v != 1.0) throw DataError("logistic labels must be 0/1");

  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[i * d + j];
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x[i * d + j] - mean[j];
      sd[j] += c * c;
    }
  for (double& s : sd) s = std::sqrt(s / static_cast<double>(n));

  std::vector<double> xs(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      xs[i * d + j] = sd[j] > 0.0 ? (x[i * d + j] - mean[j]) / sd[j] : 0.0;

  std::vector<double> w(d, 0.0), grad(d, 0.0);
  double b = 0.0, grad_b = 0.0, loss = 0.0;
  for (std::size_t e = 0; e < epochs; ++e) {
    loss = detail::logistic_loss_grad(xs, n, d, y, w, b, grad, grad_b);
    for (std::size_t j = 0; j < d; ++j) w[j] -= step * grad[j];
    b -= step * grad_b;
  }
  loss = detail::logistic_loss_grad(xs, n, d, y, w, b, grad, grad_b);

  LogisticModel model;
  model.weights.assign(d, 0.0);
  model.bias = b;
  for (std::size_t j = 0; j < d; ++j) {
    if (sd[j] > 0.0) {
      model.weights[j] = w[j] / sd[j];
      model.bias -= w[j] * mean[j] / sd[j];
    }
  }
  model.epochs = epochs;
  model.step = step;
  model.final_loss = loss;
  model.underdetermined = n < d;
  return model;
}

inline std::vector<double> predict_logistic(const LogisticModel& model, std::span<const double> x,
                                            std::size_t n, std::size_t d) {
  if (model.weights.size() != d) throw std::invalid_argument("model dimension mismatch");
  if (x.size() != n * d) throw std::invalid_argument("design matrix size mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = model.bias;
    for (std::size_t j = 0; j < d; ++j) z += model.weights[j] * x[i * d + j];
    out[i] = 1.0 / (1.0 + std::exp(-z));
  }
  return out;
}

// theta_c = 1/2 * sum over occupied cells of max(p_case, p_control), with the
// two distributions estimated as empirical cell frequencies within each
// class. Cells absent from one class contribute the other's frequency.
inline PredictivityEstimate predictivity(const DiscreteDataset& ds,
                                         std::span<const std::size_t> subset) {
  detail::validate_subset(ds, subset);
  for (double v : ds.y)
    if (v != 0.0 && v != 1.0) throw DataError("predictivity expects binary 0/1 responses");

  double cases = 0, controls = 0;
  for (double v : ds.y) (v == 1.0 ? cases : controls) += 1;
  if (cases == 0 || controls == 0)
    throw DegenerateError("predictivity needs both classes present");

  std::map<std::vector<std::int32_t>, std::pair<double, double>> counts;
  std::vector<std::int32_t> key(subset.size());
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t q = 0; q < subset.size(); ++q) key[q] = ds.code(i, subset[q]);
    auto& cell = counts[key];
    (ds.y[i] == 1.0 ? cell.first : cell.second) += 1;
  }

  PredictivityEstimate est;
  double theta = 0.0;
  for (const auto& [cell, cnt] : counts) {
    const double pd = cnt.first / cases;
    const double pu = cnt.second / controls;
    est.case_dist.emplace(cell, pd);
    est.control_dist.emplace(cell, pu);
    theta += std::max(pd, pu);
  }
  est.theta_c = 0.5 * theta;
  return est;
}

namespace detail {

inline std::string cell_key_string(const std::vector<std::int32_t>& key) {
  std::string out;
  for (std::size_t q = 0; q < key.size(); ++q) {
    if (q) out += ',';
    out += std::to_string(key[q]);
  }
  return out;
}

}  // namespace detail

inline nlohmann::json module_classifier_to_json(const ModuleClassifier& mc,
                                                const std::vector<std::string>& names) {
  nlohmann::json vars = nlohmann::json::array();
  for (std::size_t v : mc.module) vars.push_back(names.at(v));
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [key, mean] : mc.cell_table) cells[detail::cell_key_string(key)] = mean;
  return {{"module", vars}, {"cells", cells}, {"fallback", mc.fallback}};
}

inline nlohmann::json logistic_to_json(const LogisticModel& model) {
  return {{"weights", model.weights},
          {"bias", model.bias},
          {"epochs", model.epochs},
          {"step", model.step},
          {"final_loss", model.final_loss},
          {"underdetermined", model.underdetermined}};
}

}  // namespace influence
