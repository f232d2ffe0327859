#pragma once
// End-to-end orchestration: marginal screening, backward-dropping module
// generation, module-based prediction, repeated experiments with averaging,
// and the feature pruning / ablation workflow for externally produced
// feature matrices.
//
// Seed derivation per repeat r from the plan's base seed: training data uses
// base+2r, test data base+2r+1, and the module search base+r. Fixed splits
// (CSV sources) reuse their files and vary only the search seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "influence/bda.hpp"
#include "influence/common.hpp"
#include "influence/dataset.hpp"
#include "influence/discretize.hpp"
#include "influence/metrics.hpp"
#include "influence/predictor.hpp"
#include "influence/score.hpp"
#include "influence/simulate.hpp"

namespace influence {

enum class PredictorKind { module_ensemble, logistic_on_union };

inline PredictorKind parse_predictor(const std::string& name) {
  if (name == "module_ensemble") return PredictorKind::module_ensemble;
  if (name == "logistic_on_union") return PredictorKind::logistic_on_union;
  throw DataError("unknown predictor \"" + name + "\"");
}

inline std::string predictor_name(PredictorKind kind) {
  return kind == PredictorKind::module_ensemble ? "module_ensemble" : "logistic_on_union";
}

struct SimSource {
  SimModel model = SimModel::noise;
  std::size_t n_train = 0;
  std::size_t n_test = 1000;
  std::size_t p = 0;
};

struct CsvSource {
  std::string train_csv;
  std::string validate_csv;  // reserved for threshold choice; schema-checked
  std::string test_csv;
  std::string label = "label";
};

struct ExperimentPlan {
  std::optional<SimSource> sim;
  std::optional<CsvSource> csv;
  bool screening = false;
  std::size_t screening_top_m = 0;  // 0 resolves to min(p, 4k)
  BDAConfig bda;                    // seed is derived from base_seed per repeat
  double module_fraction = 1.0;
  PredictorKind predictor = PredictorKind::module_ensemble;
  std::size_t repeats = 1;
  std::uint64_t base_seed = 0;
  bool include_baseline = false;
};

struct ReportModule {
  std::vector<std::string> variables;
  double score = 0.0;
  std::size_t provenance = 1;
};

struct ExperimentReport {
  std::vector<double> repeat_aucs;
  double mean_auc = 0.0;
  double stddev_auc = 0.0;
  std::vector<std::vector<ReportModule>> modules_per_repeat;
  std::vector<std::string> selected_union;  // sorted feature names
  std::vector<double> baseline_aucs;        // empty unless the baseline ran
  std::optional<double> baseline_mean_auc;
  std::optional<double> ablation_auc;
  CutoffRule cutoffs;        // populated by the pruning workflow
  nlohmann::json plan_echo;  // resolved configuration, reusable as a plan
  double wall_seconds = 0.0;  // diagnostic; never serialized
};

// ---------------------------------------------------------------------------
// Plan JSON round trip
// ---------------------------------------------------------------------------

inline ExperimentPlan plan_from_json(const nlohmann::json& j) {
  ExperimentPlan plan;
  if (!j.contains("data")) throw DataError("plan is missing the \"data\" block");
  const auto& data = j.at("data");
  if (data.contains("model")) {
    SimSource sim;
    sim.model = parse_model(data.at("model").get<std::string>());
    sim.n_train = data.at("n_train").get<std::size_t>();
    sim.n_test = data.value("n_test", std::size_t{1000});
    sim.p = data.at("p").get<std::size_t>();
    plan.sim = sim;
  } else if (data.contains("train_csv")) {
    CsvSource csv;
    csv.train_csv = data.at("train_csv").get<std::string>();
    csv.validate_csv = data.value("validate_csv", std::string{});
    csv.test_csv = data.at("test_csv").get<std::string>();
    csv.label = data.value("label", std::string{"label"});
    plan.csv = csv;
  } else {
    throw DataError("plan \"data\" block needs either \"model\" or \"train_csv\"");
  }
  if (j.contains("screening") && !j.at("screening").is_null()) {
    plan.screening = true;
    plan.screening_top_m = j.at("screening").value("top_m", std::size_t{0});
  }
  if (j.contains("bda")) {
    const auto& b = j.at("bda");
    plan.bda.b = b.value("b", std::size_t{0});
    plan.bda.k = b.value("k", std::size_t{0});
    plan.bda.min_size = b.value("min_size", std::size_t{1});
  }
  plan.module_fraction = j.value("module_fraction", 1.0);
  if (j.contains("predictor")) plan.predictor = parse_predictor(j.at("predictor").get<std::string>());
  plan.repeats = j.value("repeats", std::size_t{1});
  plan.base_seed = j.value("seed", std::uint64_t{0});
  plan.include_baseline = j.value("include_baseline", false);
  if (plan.repeats < 1) throw DataError("plan needs repeats >= 1");
  if (!(plan.module_fraction > 0.0) || plan.module_fraction > 1.0)
    throw DataError("module_fraction must lie in (0, 1]");
  return plan;
}

inline nlohmann::json plan_to_json(const ExperimentPlan& plan) {
  nlohmann::json j;
  if (plan.sim) {
    j["data"] = {{"model", model_name(plan.sim->model)},
                 {"n_train", plan.sim->n_train},
                 {"n_test", plan.sim->n_test},
                 {"p", plan.sim->p}};
  } else if (plan.csv) {
    j["data"] = {{"train_csv", plan.csv->train_csv},
                 {"validate_csv", plan.csv->validate_csv},
                 {"test_csv", plan.csv->test_csv},
                 {"label", plan.csv->label}};
  }
  if (plan.screening) j["screening"] = {{"top_m", plan.screening_top_m}};
  j["bda"] = {{"b", plan.bda.b}, {"k", plan.bda.k}, {"min_size", plan.bda.min_size}};
  j["module_fraction"] = plan.module_fraction;
  j["predictor"] = predictor_name(plan.predictor);
  j["repeats"] = plan.repeats;
  j["seed"] = plan.base_seed;
  j["include_baseline"] = plan.include_baseline;
  return j;
}

// ---------------------------------------------------------------------------
// Stage helpers
// ---------------------------------------------------------------------------

inline std::vector<double> marginal_scores(const DiscreteDataset& ds) {
  std::vector<double> scores(ds.p);
  for (std::size_t j = 0; j < ds.p; ++j) {
    const std::size_t idx[1] = {j};
    scores[j] = iscore(ds, idx).standardized;
  }
  return scores;
}

// Indices of the m highest marginal scores (ties to the smaller index),
// returned in ascending index order.
inline std::vector<std::size_t> screen_top_m(const DiscreteDataset& ds, std::size_t m) {
  const auto scores = marginal_scores(ds);
  std::vector<std::size_t> order(ds.p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(std::min(m, ds.p));
  std::sort(order.begin(), order.end());
  return order;
}

inline DiscreteDataset subset_columns(const DiscreteDataset& ds,
                                      std::span<const std::size_t> cols) {
  std::vector<std::int32_t> codes(ds.n * cols.size());
  std::vector<std::string> names;
  names.reserve(cols.size());
  for (std::size_t c : cols) names.push_back(ds.feature_names.at(c));
  for (std::size_t i = 0; i < ds.n; ++i)
    for (std::size_t q = 0; q < cols.size(); ++q) codes[i * cols.size() + q] = ds.code(i, cols[q]);
  return DiscreteDataset(ds.n, cols.size(), std::move(codes), ds.y, std::move(names));
}

inline ContinuousDataset subset_columns(const ContinuousDataset& ds,
                                        std::span<const std::size_t> cols) {
  std::vector<double> vals(ds.n * cols.size());
  std::vector<std::string> names;
  names.reserve(cols.size());
  for (std::size_t c : cols) names.push_back(ds.feature_names.at(c));
  for (std::size_t i = 0; i < ds.n; ++i)
    for (std::size_t q = 0; q < cols.size(); ++q) vals[i * cols.size() + q] = ds.at(i, cols[q]);
  return ContinuousDataset(ds.n, cols.size(), std::move(vals), ds.y, std::move(names));
}

namespace detail {

inline std::vector<double> codes_as_matrix(const DiscreteDataset& ds,
                                           std::span<const std::size_t> cols) {
  std::vector<double> m(ds.n * cols.size());
  for (std::size_t i = 0; i < ds.n; ++i)
    for (std::size_t q = 0; q < cols.size(); ++q)
      m[i * cols.size() + q] = static_cast<double>(ds.code(i, cols[q]));
  return m;
}

inline std::vector<double> values_as_matrix(const ContinuousDataset& ds,
                                            std::span<const std::size_t> cols) {
  std::vector<double> m(ds.n * cols.size());
  for (std::size_t i = 0; i < ds.n; ++i)
    for (std::size_t q = 0; q < cols.size(); ++q) m[i * cols.size() + q] = ds.at(i, cols[q]);
  return m;
}

struct StageResult {
  std::vector<VariableModule> modules;      // original column indices
  std::vector<std::size_t> union_columns;   // sorted original indices
  BDAConfig resolved;
  std::size_t screened_m = 0;
};

// Screening + module search + top-fraction selection on a discrete training
// set; module indices are mapped back to original columns.
inline StageResult select_modules(const DiscreteDataset& train, const ExperimentPlan& plan,
                                  std::uint64_t bda_seed, unsigned threads) {
  StageResult out;
  std::vector<std::size_t> screened(train.p);
  std::iota(screened.begin(), screened.end(), std::size_t{0});

  BDAConfig cfg = plan.bda;
  if (plan.screening) {
    std::size_t m = plan.screening_top_m;
    if (m == 0) {
      const std::size_t k = cfg.k == 0 ? std::min<std::size_t>(10, train.p) : cfg.k;
      m = std::min(train.p, 4 * k);
    }
    m = std::min(m, train.p);
    screened = screen_top_m(train, m);
  }
  out.screened_m = screened.size();

  const DiscreteDataset sub = subset_columns(train, screened);
  cfg.seed = bda_seed;
  cfg = resolve_config(cfg, sub.p);
  out.resolved = cfg;

  const ModuleSet ms = run_bda(sub, cfg, threads);
  const TopSelection sel = select_top_fraction(ms, plan.module_fraction);
  for (const auto& mod : sel.modules) {
    VariableModule mapped = mod;
    for (auto& v : mapped.variables) v = screened[v];
    out.modules.push_back(std::move(mapped));
  }
  for (std::size_t v : sel.union_variables) out.union_columns.push_back(screened[v]);
  return out;
}

inline std::vector<ReportModule> to_report_modules(const std::vector<VariableModule>& mods,
                                                   const std::vector<std::string>& names) {
  std::vector<ReportModule> out;
  out.reserve(mods.size());
  for (const auto& mod : mods) {
    ReportModule rm;
    for (std::size_t v : mod.variables) rm.variables.push_back(names.at(v));
    rm.score = mod.score;
    rm.provenance = mod.provenance;
    out.push_back(std::move(rm));
  }
  return out;
}

inline void finalize_stats(ExperimentReport& report) {
  double sum = 0.0;
  for (double a : report.repeat_aucs) sum += a;
  report.mean_auc = sum / static_cast<double>(report.repeat_aucs.size());
  double ss = 0.0;
  for (double a : report.repeat_aucs) ss += (a - report.mean_auc) * (a - report.mean_auc);
  report.stddev_auc = std::sqrt(ss / static_cast<double>(report.repeat_aucs.size()));
  if (!report.baseline_aucs.empty()) {
    double bsum = 0.0;
    for (double a : report.baseline_aucs) bsum += a;
    report.baseline_mean_auc = bsum / static_cast<double>(report.baseline_aucs.size());
  }
}

inline void merge_union_names(std::vector<std::string>& into, const DiscreteDataset& ds,
                              std::span<const std::size_t> cols) {
  for (std::size_t c : cols) into.push_back(ds.feature_names.at(c));
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

struct RepeatData {
  DiscreteDataset train;
  DiscreteDataset test;
};

inline RepeatData repeat_data(const ExperimentPlan& plan, std::size_t r) {
  RepeatData d;
  if (plan.sim) {
    SimSpec train_spec{plan.sim->model, plan.sim->n_train, plan.sim->p,
                       plan.base_seed + 2 * static_cast<std::uint64_t>(r)};
    SimSpec test_spec{plan.sim->model, plan.sim->n_test, plan.sim->p,
                      plan.base_seed + 2 * static_cast<std::uint64_t>(r) + 1};
    d.train = generate(train_spec);
    d.test = generate(test_spec);
  } else if (plan.csv) {
    d.train = to_discrete(load_csv(plan.csv->train_csv, plan.csv->label));
    d.test = to_discrete(load_csv(plan.csv->test_csv, plan.csv->label));
    if (d.train.feature_names != d.test.feature_names)
      throw DataError("train/test CSVs do not share the same column schema");
  } else {
    throw std::invalid_argument("plan has no data source");
  }
  return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

inline ExperimentReport run_experiment(const ExperimentPlan& plan, unsigned threads = 0) {
  if (plan.repeats < 1) throw std::invalid_argument("plan needs repeats >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  nlohmann::json echo;

  for (std::size_t r = 0; r < plan.repeats; ++r) {
    const auto data = detail::repeat_data(plan, r);
    const auto stage =
        detail::select_modules(data.train, plan, plan.base_seed + r, threads);

    std::vector<double> scores;
    if (plan.predictor == PredictorKind::module_ensemble) {
      std::vector<std::pair<ModuleClassifier, double>> weighted;
      weighted.reserve(stage.modules.size());
      for (const auto& mod : stage.modules)
        weighted.emplace_back(fit_module_classifier(data.train, mod.variables), mod.score);
      scores = combine_modules(weighted, data.test);
    } else {
      const auto xtrain = detail::codes_as_matrix(data.train, stage.union_columns);
      const auto model = fit_logistic(xtrain, data.train.n, stage.union_columns.size(),
                                      data.train.y);
      const auto xtest = detail::codes_as_matrix(data.test, stage.union_columns);
      scores = predict_logistic(model, xtest, data.test.n, stage.union_columns.size());
    }
    report.repeat_aucs.push_back(auc(data.test.y, scores));
    report.modules_per_repeat.push_back(
        detail::to_report_modules(stage.modules, data.train.feature_names));
    detail::merge_union_names(report.selected_union, data.train, stage.union_columns);

    if (plan.include_baseline) {
      std::vector<std::size_t> all(data.train.p);
      std::iota(all.begin(), all.end(), std::size_t{0});
      const auto xtrain = detail::codes_as_matrix(data.train, all);
      const auto model = fit_logistic(xtrain, data.train.n, data.train.p, data.train.y);
      const auto xtest = detail::codes_as_matrix(data.test, all);
      report.baseline_aucs.push_back(
          auc(data.test.y, predict_logistic(model, xtest, data.test.n, data.test.p)));
    }

    if (r == 0) {
      ExperimentPlan resolved = plan;
      resolved.bda = stage.resolved;
      resolved.bda.seed = 0;  // derived per repeat; not a plan field
      if (plan.screening) resolved.screening_top_m = stage.screened_m;
      echo = plan_to_json(resolved);
    }
  }

  detail::finalize_stats(report);
  report.plan_echo = std::move(echo);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// No screening, no module search: logistic on every variable's raw codes.
inline ExperimentReport run_all_variables_baseline(const ExperimentPlan& plan,
                                                   unsigned threads = 0) {
  (void)threads;
  if (plan.repeats < 1) throw std::invalid_argument("plan needs repeats >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  for (std::size_t r = 0; r < plan.repeats; ++r) {
    const auto data = detail::repeat_data(plan, r);
    std::vector<std::size_t> all(data.train.p);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto xtrain = detail::codes_as_matrix(data.train, all);
    const auto model = fit_logistic(xtrain, data.train.n, data.train.p, data.train.y);
    const auto xtest = detail::codes_as_matrix(data.test, all);
    report.repeat_aucs.push_back(
        auc(data.test.y, predict_logistic(model, xtest, data.test.n, data.test.p)));
  }
  detail::finalize_stats(report);
  auto echo = plan_to_json(plan);
  echo["predictor"] = "all_variables_logistic";
  report.plan_echo = std::move(echo);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

namespace detail {

struct PruneData {
  ContinuousDataset train;
  ContinuousDataset test;
};

inline PruneData load_prune_data(const CsvSource& src) {
  PruneData d;
  d.train = load_csv(src.train_csv, src.label);
  d.test = load_csv(src.test_csv, src.label);
  if (d.train.feature_names != d.test.feature_names)
    throw DataError("train/test CSVs do not share the same column schema");
  if (!src.validate_csv.empty()) {
    const auto val = load_csv(src.validate_csv, src.label);
    if (val.feature_names != d.train.feature_names)
      throw DataError("validate CSV does not share the train column schema");
  }
  for (double v : d.train.y)
    if (v != 0.0 && v != 1.0) throw DataError("pruning workflow needs binary 0/1 labels");
  for (double v : d.test.y)
    if (v != 0.0 && v != 1.0) throw DataError("pruning workflow needs binary 0/1 labels");
  return d;
}

inline ExperimentReport run_prune(const ExperimentPlan& plan, const PruneData& data,
                                  unsigned threads) {
  if (plan.repeats < 1) throw std::invalid_argument("plan needs repeats >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.cutoffs = fit_cutoff_rule(data.train, CutoffStrategy::iscore);
  const DiscreteDataset train_bin = binarize_by_cutoff(data.train, report.cutoffs);

  nlohmann::json echo;
  for (std::size_t r = 0; r < plan.repeats; ++r) {
    const auto stage = select_modules(train_bin, plan, plan.base_seed + r, threads);
    // The search ran on binarized codes; the downstream classifier uses the
    // raw values of the selected union, fit on train only.
    const auto xtrain = values_as_matrix(data.train, stage.union_columns);
    const auto model =
        fit_logistic(xtrain, data.train.n, stage.union_columns.size(), data.train.y);
    const auto xtest = values_as_matrix(data.test, stage.union_columns);
    const auto scores = predict_logistic(model, xtest, data.test.n, stage.union_columns.size());
    report.repeat_aucs.push_back(auc(data.test.y, scores));
    report.modules_per_repeat.push_back(to_report_modules(stage.modules, train_bin.feature_names));
    merge_union_names(report.selected_union, train_bin, stage.union_columns);
    if (r == 0) {
      ExperimentPlan resolved = plan;
      resolved.bda = stage.resolved;
      resolved.bda.seed = 0;
      if (plan.screening) resolved.screening_top_m = stage.screened_m;
      resolved.predictor = PredictorKind::logistic_on_union;
      echo = plan_to_json(resolved);
      echo["workflow"] = "feature_prune";
    }
  }

  finalize_stats(report);
  report.plan_echo = std::move(echo);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace detail

// Binarizes continuous features with train-fit cutoffs, selects variable
// modules on the binarized training data, then scores a logistic model on
// the raw values of the selected union.
inline ExperimentReport feature_prune_pipeline(const ExperimentPlan& plan, unsigned threads = 0) {
  if (!plan.csv) throw std::invalid_argument("pruning workflow needs CSV train/validate/test");
  const auto data = detail::load_prune_data(*plan.csv);
  return detail::run_prune(plan, data, threads);
}

// Reruns the identical pruning pipeline with the previously selected columns
// removed. The rerun's full report is returned; its selection is disjoint
// from the original union by construction.
inline ExperimentReport ablation_report(const ExperimentReport& prior, unsigned threads = 0) {
  if (!prior.plan_echo.contains("workflow") || prior.plan_echo["workflow"] != "feature_prune")
    throw std::invalid_argument("ablation needs a feature_prune report");
  const ExperimentPlan plan = plan_from_json(prior.plan_echo);
  auto data = detail::load_prune_data(*plan.csv);

  if (prior.selected_union.empty()) {
    ExperimentReport unchanged = prior;
    unchanged.ablation_auc = prior.mean_auc;
    return unchanged;
  }

  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < data.train.p; ++j) {
    const auto& name = data.train.feature_names[j];
    if (std::find(prior.selected_union.begin(), prior.selected_union.end(), name) ==
        prior.selected_union.end())
      keep.push_back(j);
  }
  if (keep.empty())
    throw std::invalid_argument("selection covers all columns; nothing left to ablate");

  detail::PruneData reduced;
  reduced.train = subset_columns(data.train, keep);
  reduced.test = subset_columns(data.test, keep);

  ExperimentPlan reduced_plan = plan;
  if (reduced_plan.screening && reduced_plan.screening_top_m > keep.size())
    reduced_plan.screening_top_m = keep.size();
  if (reduced_plan.bda.k > keep.size()) reduced_plan.bda.k = keep.size();

  ExperimentReport rerun = detail::run_prune(reduced_plan, reduced, threads);
  rerun.plan_echo["workflow"] = "feature_prune_ablation";
  rerun.plan_echo["removed_features"] = prior.selected_union;
  return rerun;
}

inline double ablation(const ExperimentReport& prior, unsigned threads = 0) {
  if (prior.selected_union.empty()) return prior.mean_auc;
  return ablation_report(prior, threads).mean_auc;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["plan"] = report.plan_echo;
  j["repeat_aucs"] = report.repeat_aucs;
  j["mean_auc"] = report.mean_auc;
  j["stddev_auc"] = report.stddev_auc;
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& mods : report.modules_per_repeat) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& mod : mods)
      arr.push_back({{"variables", mod.variables},
                     {"score", mod.score},
                     {"provenance", mod.provenance}});
    reps.push_back(std::move(arr));
  }
  j["modules_per_repeat"] = std::move(reps);
  j["selected_union"] = report.selected_union;
  if (!report.baseline_aucs.empty()) {
    j["baseline"] = {{"repeat_aucs", report.baseline_aucs},
                     {"mean_auc", *report.baseline_mean_auc}};
  }
  if (report.ablation_auc) j["ablation_auc"] = *report.ablation_auc;
  if (!report.cutoffs.names.empty()) j["cutoffs"] = cutoff_rule_to_json(report.cutoffs);
  return j;
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport report;
  report.plan_echo = j.at("plan");
  report.repeat_aucs = j.at("repeat_aucs").get<std::vector<double>>();
  report.mean_auc = j.at("mean_auc").get<double>();
  report.stddev_auc = j.at("stddev_auc").get<double>();
  for (const auto& arr : j.at("modules_per_repeat")) {
    std::vector<ReportModule> mods;
    for (const auto& m : arr) {
      ReportModule rm;
      rm.variables = m.at("variables").get<std::vector<std::string>>();
      rm.score = m.at("score").get<double>();
      rm.provenance = m.at("provenance").get<std::size_t>();
      mods.push_back(std::move(rm));
    }
    report.modules_per_repeat.push_back(std::move(mods));
  }
  report.selected_union = j.at("selected_union").get<std::vector<std::string>>();
  if (j.contains("baseline")) {
    report.baseline_aucs = j.at("baseline").at("repeat_aucs").get<std::vector<double>>();
    report.baseline_mean_auc = j.at("baseline").at("mean_auc").get<double>();
  }
  if (j.contains("ablation_auc")) report.ablation_auc = j.at("ablation_auc").get<double>();
  if (j.contains("cutoffs")) report.cutoffs = cutoff_rule_from_json(j.at("cutoffs"));
  return report;
}

// Aligned two-row table in the style of the benchmark write-ups.
inline std::string report_to_text(const ExperimentReport& report) {
  std::ostringstream out;
  auto fmt = [](double mean, double sd) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f +/- %.3f", mean, sd);
    return std::string(buf);
  };
  std::string setting = "experiment";
  if (report.plan_echo.contains("data")) {
    const auto& d = report.plan_echo["data"];
    if (d.contains("model"))
      setting = d["model"].get<std::string>() + "  n_train=" +
                std::to_string(d["n_train"].get<std::size_t>()) +
                "  p=" + std::to_string(d["p"].get<std::size_t>());
    else if (d.contains("train_csv"))
      setting = d["train_csv"].get<std::string>();
  }
  out << "Setting: " << setting << "   repeats=" << report.repeat_aucs.size() << "\n";
  const std::string predictor =
      report.plan_echo.value("predictor", std::string{"module_ensemble"});
  auto row = [&](const std::string& label, const std::string& value) {
    out << "  " << label;
    if (label.size() < 38) out << std::string(38 - label.size(), ' ');
    out << value << "\n";
  };
  out << "  " << std::string(56, '-') << "\n";
  if (report.baseline_mean_auc) {
    double bss = 0.0;
    for (double a : report.baseline_aucs)
      bss += (a - *report.baseline_mean_auc) * (a - *report.baseline_mean_auc);
    const double bsd = std::sqrt(bss / static_cast<double>(report.baseline_aucs.size()));
    row("All Var. (logistic)", fmt(*report.baseline_mean_auc, bsd));
  }
  row("I-score: Top Mod. (" + predictor + ")", fmt(report.mean_auc, report.stddev_auc));
  if (report.ablation_auc) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", *report.ablation_auc);
    row("removal of selected features", buf);
  }
  return out.str();
}

}  // namespace influence
