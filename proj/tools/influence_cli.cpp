// Command-line surface for the influence-score toolkit. Every subcommand
// writes its primary artifact to stdout or to --out and keeps diagnostics on
// stderr; identical flags and inputs produce byte-identical artifacts.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric degeneracy.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "influence/influence.hpp"

namespace {

using namespace influence;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open \"" + path + "\"");
  return nlohmann::json::parse(in);  // parse_error carries the byte offset
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write \"" + path + "\"");
  out << j.dump(2) << '\n';
}

std::vector<std::string> split_names(const std::string& joined) {
  std::vector<std::string> names;
  std::string cur;
  for (char c : joined) {
    if (c == ',') {
      names.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  names.push_back(cur);
  return names;
}

std::vector<std::size_t> subset_indices(const DiscreteDataset& ds, const std::string& joined) {
  std::vector<std::size_t> indices;
  for (const auto& name : split_names(joined)) {
    bool found = false;
    for (std::size_t j = 0; j < ds.p; ++j) {
      if (ds.feature_names[j] == name) {
        indices.push_back(j);
        found = true;
        break;
      }
    }
    if (!found) throw DataError("no column named \"" + name + "\" in the data");
  }
  return indices;
}

DiscreteDataset ingest(const std::string& path, const std::string& label,
                       const std::string& discretize) {
  const auto cont = load_csv(path, label);
  if (discretize.empty()) return to_discrete(cont);
  CutoffStrategy strategy = CutoffStrategy::median;
  if (discretize == "median")
    strategy = CutoffStrategy::median;
  else if (discretize == "iscore")
    strategy = CutoffStrategy::iscore;
  else if (discretize == "twomeans")
    strategy = CutoffStrategy::two_means;
  else
    throw std::invalid_argument("--discretize must be median, iscore or twomeans");
  return binarize_by_cutoff(cont, fit_cutoff_rule(cont, strategy));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "influence: interaction-based feature assessment and selection.\n"
      "Computes influence scores over variable-subset partitions, searches for\n"
      "variable modules by backward dropping, and runs the module-based\n"
      "prediction and feature-pruning workflows."};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads for the module search (0 = all cores); results "
                 "do not depend on this");

  // ---- iscore ----
  auto* cmd_iscore = app.add_subcommand("iscore", "Influence score of a variable subset");
  std::string is_data, is_label, is_subset, is_discretize;
  cmd_iscore->add_option("--data", is_data, "Input CSV")->required();
  cmd_iscore->add_option("--label", is_label, "Label column name")->required();
  cmd_iscore->add_option("--subset", is_subset, "Comma-separated feature names")->required();
  cmd_iscore->add_option("--discretize", is_discretize,
                         "Binarize continuous columns first: median|iscore|twomeans");
  cmd_iscore->callback([&] {
    const auto ds = ingest(is_data, is_label, is_discretize);
    const auto value = iscore(ds, subset_indices(ds, is_subset));
    std::cout << iscore_to_json(value, ds.feature_names).dump(2) << '\n';
  });

  // ---- bda ----
  auto* cmd_bda = app.add_subcommand("bda", "Backward-dropping module search");
  std::string bda_data, bda_label, bda_discretize, bda_out;
  BDAConfig bda_cfg;
  double top_frac = 1.0;
  cmd_bda->add_option("--data", bda_data, "Input CSV")->required();
  cmd_bda->add_option("--label", bda_label, "Label column name")->required();
  cmd_bda->add_option("--b", bda_cfg.b, "Random starts (0 = 20*p/k)");
  cmd_bda->add_option("--k", bda_cfg.k, "Initial subset size (0 = min(10, p))");
  cmd_bda->add_option("--seed", bda_cfg.seed, "Search seed")->envname("INFLUENCE_SEED");
  cmd_bda->add_option("--min-size", bda_cfg.min_size, "Smallest subset evaluated")
      ->default_val(std::size_t{1});
  cmd_bda->add_option("--top-frac", top_frac, "Fraction of modules kept in the selection block")
      ->default_val(1.0);
  cmd_bda->add_option("--discretize", bda_discretize,
                      "Binarize continuous columns first: median|iscore|twomeans");
  cmd_bda->add_option("--out", bda_out, "Output JSON path")->required();
  cmd_bda->callback([&] {
    const auto ds = ingest(bda_data, bda_label, bda_discretize);
    const auto ms = run_bda(ds, bda_cfg, threads);
    auto j = module_set_to_json(ms, ds.feature_names);
    const auto sel = select_top_fraction(ms, top_frac);
    nlohmann::json mods = nlohmann::json::array();
    for (const auto& mod : sel.modules) mods.push_back(module_to_json(mod, ds.feature_names));
    nlohmann::json union_names = nlohmann::json::array();
    for (std::size_t v : sel.union_variables) union_names.push_back(ds.feature_names[v]);
    j["selection"] = {{"fraction", top_frac}, {"modules", mods}, {"union", union_names}};
    write_json_file(bda_out, j);
    std::cerr << "wrote " << ms.modules.size() << " modules to " << bda_out << '\n';
  });

  // ---- simulate ----
  auto* cmd_sim = app.add_subcommand("simulate", "Generate a benchmark dataset as CSV");
  std::string sim_model, sim_out;
  SimSpec sim_spec;
  cmd_sim->add_option("--model", sim_model, "example1|example2|noise")->required();
  cmd_sim->add_option("--n", sim_spec.n, "Observations")->required();
  cmd_sim->add_option("--p", sim_spec.p, "Variables")->required();
  cmd_sim->add_option("--seed", sim_spec.seed, "Generator seed")->envname("INFLUENCE_SEED");
  cmd_sim->add_option("--out", sim_out, "Output CSV path")->required();
  cmd_sim->callback([&] {
    sim_spec.model = parse_model(sim_model);
    write_csv(generate(sim_spec), sim_out);
    std::cerr << "wrote " << sim_spec.n << "x" << sim_spec.p << " dataset to " << sim_out << '\n';
  });

  // ---- experiment ----
  auto* cmd_exp = app.add_subcommand("experiment", "Run a repeated selection+prediction plan");
  std::string exp_plan, exp_out;
  cmd_exp->add_option("--plan", exp_plan, "Plan JSON path")->required();
  cmd_exp->add_option("--out", exp_out, "Report JSON path")->required();
  cmd_exp->callback([&] {
    const auto plan = plan_from_json(read_json_file(exp_plan));
    const auto report = run_experiment(plan, threads);
    write_json_file(exp_out, report_to_json(report));
    std::cout << report_to_text(report);
    std::cerr << "report written to " << exp_out << " (" << report.wall_seconds << " s)\n";
  });

  // ---- prune ----
  auto* cmd_prune = app.add_subcommand(
      "prune", "Select predictive features from a continuous feature matrix");
  std::string prune_plan, prune_out;
  cmd_prune->add_option("--plan", prune_plan, "Plan JSON path (CSV data block)")->required();
  cmd_prune->add_option("--out", prune_out, "Report JSON path")->required();
  cmd_prune->callback([&] {
    const auto plan = plan_from_json(read_json_file(prune_plan));
    const auto report = feature_prune_pipeline(plan, threads);
    write_json_file(prune_out, report_to_json(report));
    std::cout << report_to_text(report);
    std::cerr << "report written to " << prune_out << " (" << report.wall_seconds << " s)\n";
  });

  // ---- ablate ----
  auto* cmd_ablate = app.add_subcommand(
      "ablate", "Rerun a prune report with its selected features removed");
  std::string ablate_report, ablate_out;
  cmd_ablate->add_option("--report", ablate_report, "Prior prune report JSON")->required();
  cmd_ablate->add_option("--out", ablate_out, "Ablation report JSON path")->required();
  cmd_ablate->callback([&] {
    const auto prior = report_from_json(read_json_file(ablate_report));
    auto rerun = ablation_report(prior, threads);
    rerun.ablation_auc = rerun.mean_auc;
    write_json_file(ablate_out, report_to_json(rerun));
    std::cout << report_to_text(rerun);
    std::cerr << "ablation report written to " << ablate_out << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
