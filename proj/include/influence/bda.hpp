#pragma once
// Backward dropping search for variable modules.
//
// A single run starts from a random size-k subset and repeatedly removes the
// variable whose removal yields the highest standardized I-score, recording
// every visited subset. The subset with the peak score along that path is
// the run's module. The driver repeats this from B random starts, merges
// duplicate modules, and ranks the survivors by score.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "influence/common.hpp"
#include "influence/dataset.hpp"
#include "influence/score.hpp"

namespace influence {

struct BDAConfig {
  std::size_t b = 0;         // number of random starts; 0 resolves to 20*p/k
  std::size_t k = 0;         // initial subset size; 0 resolves to min(10, p)
  std::uint64_t seed = 0;
  std::size_t min_size = 1;  // smallest subset evaluated
};

// Fills in the documented defaults against a concrete variable count.
inline BDAConfig resolve_config(BDAConfig cfg, std::size_t p) {
  if (cfg.k == 0) cfg.k = std::min<std::size_t>(10, p);
  if (cfg.b == 0) cfg.b = std::max<std::size_t>(1, (20 * p) / cfg.k);
  return cfg;
}

struct DropTrace {
  struct Step {
    std::vector<std::size_t> subset;  // sorted
    double score = 0.0;               // standardized I-score of this subset
  };
  std::vector<Step> steps;                 // size k down to min_size
  std::vector<std::size_t> dropped_order;  // variables in drop order
};

struct VariableModule {
  std::vector<std::size_t> variables;  // sorted, non-empty
  double score = 0.0;
  std::size_t provenance = 1;  // how many traces peaked at this subset
};

struct ModuleSet {
  std::vector<VariableModule> modules;  // score desc, then lexicographic
  BDAConfig config;
};

namespace detail {

inline std::uint64_t bounded_rand(std::mt19937_64& g, std::uint64_t m) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % m;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % m;
}

// Partial Fisher-Yates; uniform without replacement, fixed algorithm so the
// stream is reproducible across standard libraries.
inline std::vector<std::size_t> sample_subset(std::mt19937_64& g, std::size_t k, std::size_t p) {
  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded_rand(g, p - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace detail

inline DropTrace run_bda_once(const DiscreteDataset& ds, std::vector<std::size_t> initial,
                              std::size_t min_size = 1) {
  detail::validate_subset(ds, initial);
  if (min_size < 1 || min_size > initial.size())
    throw std::invalid_argument("min_size must lie in [1, |initial|]");

  DropTrace trace;
  std::vector<std::size_t> current = initial;
  auto record = [&](double score) {
    DropTrace::Step step;
    step.subset = current;
    std::sort(step.subset.begin(), step.subset.end());
    step.score = score;
    trace.steps.push_back(std::move(step));
  };

  record(iscore(ds, current).standardized);
  std::vector<std::size_t> tentative;
  while (current.size() > min_size) {
    double best_score = -1.0;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < current.size(); ++pos) {
      tentative.clear();
      for (std::size_t q = 0; q < current.size(); ++q)
        if (q != pos) tentative.push_back(current[q]);
      const double score = iscore(ds, tentative).standardized;
      // Ties drop the smallest variable index.
      if (score > best_score ||
          (score == best_score && current[pos] < current[best_pos])) {
        best_score = score;
        best_pos = pos;
      }
    }
    trace.dropped_order.push_back(current[best_pos]);
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(best_pos));
    record(best_score);
  }
  return trace;
}

// The subset with the maximal score on the path; ties go to the smaller
// subset (sizes along a trace are strictly decreasing).
inline VariableModule peak_module(const DropTrace& trace) {
  if (trace.steps.empty()) throw std::invalid_argument("empty drop trace");
  const DropTrace::Step* best = &trace.steps.front();
  for (const auto& step : trace.steps)
    if (step.score > best->score || (step.score == best->score && step.subset.size() < best->subset.size()))
      best = &step;
  VariableModule mod;
  mod.variables = best->subset;
  mod.score = best->score;
  mod.provenance = 1;
  return mod;
}

// B independent runs; start b is seeded with seed^b, so the set of starts is
// a pure function of (config, p). Runs are distributed across threads and
// merged in run order, which keeps the result identical for any thread count.
inline ModuleSet run_bda(const DiscreteDataset& ds, BDAConfig cfg, unsigned threads = 0) {
  cfg = resolve_config(cfg, ds.p);
  if (cfg.k > ds.p) throw std::invalid_argument("initial subset size k exceeds p");
  if (cfg.b < 1) throw std::invalid_argument("need at least one run");
  if (cfg.min_size < 1 || cfg.min_size > cfg.k)
    throw std::invalid_argument("min_size must lie in [1, k]");
  {
    const auto [ybar, s2] = global_stats(ds);
    (void)ybar;
    if (s2 <= 0.0) throw DegenerateError("response is constant; the I-score normalizer is zero");
  }

  std::vector<VariableModule> peaks(cfg.b);
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(b));
      auto initial = detail::sample_subset(rng, cfg.k, ds.p);
      peaks[b] = peak_module(run_bda_once(ds, std::move(initial), cfg.min_size));
    }
  };

  unsigned nthreads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, cfg.b));
  if (nthreads <= 1) {
    worker(0, cfg.b);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.b + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(cfg.b, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Merge duplicates: max score (identical by construction on one dataset),
  // summed provenance. The map keeps the reduction order-independent.
  std::map<std::vector<std::size_t>, VariableModule> merged;
  for (auto& mod : peaks) {
    auto it = merged.find(mod.variables);
    if (it == merged.end()) {
      merged.emplace(mod.variables, std::move(mod));
    } else {
      it->second.score = std::max(it->second.score, mod.score);
      it->second.provenance += mod.provenance;
    }
  }

  ModuleSet out;
  out.config = cfg;
  out.modules.reserve(merged.size());
  for (auto& [vars, mod] : merged) out.modules.push_back(std::move(mod));
  std::sort(out.modules.begin(), out.modules.end(),
            [](const VariableModule& a, const VariableModule& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.variables < b.variables;
            });
  return out;
}

// Test oracle: enumerate every subset of size 1..max_size. Tie order is
// score desc, then smaller size, then lexicographic.
inline VariableModule exhaustive_best_subset(const DiscreteDataset& ds, std::size_t max_size) {
  if (max_size < 1 || max_size > ds.p)
    throw std::invalid_argument("max_size must lie in [1, p]");
  double total = 0.0;
  {
    double c = 1.0;
    for (std::size_t s = 1; s <= max_size; ++s) {
      c = c * static_cast<double>(ds.p - s + 1) / static_cast<double>(s);
      total += c;
      if (total > 1e6)
        throw std::invalid_argument("subset enumeration would exceed the 1e6 guard");
    }
  }

  VariableModule best;
  best.score = -1.0;
  std::vector<std::size_t> comb;
  for (std::size_t size = 1; size <= max_size; ++size) {
    comb.resize(size);
    std::iota(comb.begin(), comb.end(), std::size_t{0});
    while (true) {
      const double score = iscore(ds, comb).standardized;
      if (score > best.score) {
        best.variables = comb;
        best.score = score;
      }
      // Advance to the next lexicographic combination.
      std::size_t i = size;
      while (i > 0 && comb[i - 1] == ds.p - size + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t q = i; q < size; ++q) comb[q] = comb[q - 1] + 1;
    }
  }
  best.provenance = 1;
  return best;
}

struct TopSelection {
  std::vector<VariableModule> modules;
  std::vector<std::size_t> union_variables;  // sorted, deduplicated
};

inline TopSelection select_top_fraction(const ModuleSet& ms, double fraction) {
  if (ms.modules.empty()) throw std::invalid_argument("module set is empty");
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("fraction must lie in (0, 1]");
  const auto count = std::min<std::size_t>(
      ms.modules.size(),
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ms.modules.size()))));
  TopSelection sel;
  sel.modules.assign(ms.modules.begin(), ms.modules.begin() + static_cast<std::ptrdiff_t>(count));
  for (const auto& mod : sel.modules)
    sel.union_variables.insert(sel.union_variables.end(), mod.variables.begin(),
                               mod.variables.end());
  std::sort(sel.union_variables.begin(), sel.union_variables.end());
  sel.union_variables.erase(std::unique(sel.union_variables.begin(), sel.union_variables.end()),
                            sel.union_variables.end());
  return sel;
}

inline nlohmann::json module_to_json(const VariableModule& mod,
                                     const std::vector<std::string>& names) {
  nlohmann::json vars = nlohmann::json::array();
  for (std::size_t v : mod.variables) vars.push_back(names.at(v));
  return {{"variables", vars}, {"score", mod.score}, {"provenance", mod.provenance}};
}

inline nlohmann::json module_set_to_json(const ModuleSet& ms,
                                         const std::vector<std::string>& names) {
  nlohmann::json mods = nlohmann::json::array();
  for (const auto& mod : ms.modules) mods.push_back(module_to_json(mod, names));
  return {{"config",
           {{"b", ms.config.b},
            {"k", ms.config.k},
            {"seed", ms.config.seed},
            {"min_size", ms.config.min_size}}},
          {"modules", mods}};
}

// Audit export: one row per visited subset, variables joined with '|'.
inline std::string trace_to_csv(const DropTrace& trace, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "step,subset,score\n";
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    out << s << ',';
    for (std::size_t q = 0; q < trace.steps[s].subset.size(); ++q) {
      if (q) out << '|';
      out << names.at(trace.steps[s].subset[q]);
    }
    out << ',' << detail::fmt_double(trace.steps[s].score) << '\n';
  }
  return out.str();
}

}  // namespace influence
