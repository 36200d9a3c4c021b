#pragma once

// Runs a schedule (or the adaptive proposer) against a known true DAG,
// feeding oracle answers to one or both knowledge engines.

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "intervene/enumerate.hpp"
#include "intervene/knowledge.hpp"
#include "intervene/oracle.hpp"
#include "intervene/planner.hpp"

namespace intervene {

enum class Engine { Pairwise, Exact, Both };
enum class RunStatus { Recovered, Unresolved, Contradiction };
enum class Strategy { Single, Binary, Kmax };

inline const char* to_string(Engine e) {
  switch (e) {
    case Engine::Pairwise: return "pairwise";
    case Engine::Exact: return "exact";
    case Engine::Both: return "both";
  }
  return "?";
}

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Recovered: return "recovered";
    case RunStatus::Unresolved: return "unresolved";
    case RunStatus::Contradiction: return "contradiction";
  }
  return "?";
}

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Single: return "single";
    case Strategy::Binary: return "binary";
    case Strategy::Kmax: return "kmax";
  }
  return "?";
}

inline Schedule plan_schedule(std::size_t n, Strategy strategy, std::optional<std::size_t> kmax = std::nullopt) {
  switch (strategy) {
    case Strategy::Single: return single_intervention_schedule(n);
    case Strategy::Binary: return binary_codeword_schedule(n);
    case Strategy::Kmax:
      if (!kmax) throw ArgumentError("the kmax strategy needs a kmax value");
      return kmax_schedule(n, *kmax);
  }
  throw ArgumentError("unknown strategy");
}

/// The length each construction is known to achieve.
inline std::size_t strategy_bound(std::size_t n, Strategy strategy, std::optional<std::size_t> kmax = std::nullopt) {
  switch (strategy) {
    case Strategy::Single: return n - 1;
    case Strategy::Binary: return unrestricted_bound(n);
    case Strategy::Kmax: return kmax_bound(n, kmax.value_or(1));
  }
  return 0;
}

struct SimulationOptions {
  Engine engine = Engine::Pairwise;
  bool collider_rule = false;
  bool adaptive = false;
  std::optional<std::size_t> kmax;          // adaptive proposals only
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::optional<std::size_t> max_adaptive_steps;  // default 2·C(n,2) + 1
};

struct StepRecord {
  Experiment experiment;
  std::vector<PairOutcome> outcomes;
  std::size_t resolved_pairs = 0;
  std::optional<std::size_t> consistent_set_size;
};

struct RunResult {
  std::size_t n = 0;
  Schedule schedule{1};
  std::vector<StepRecord> steps;
  RunStatus status = RunStatus::Unresolved;
  std::optional<Dag> recovered;
  std::string contradiction;
  std::optional<KnowledgeState> pairwise;
  std::optional<std::size_t> consistent_set_size;

  std::size_t experiment_count() const { return steps.size(); }
};

namespace detail {

inline bool uses_pairwise(const SimulationOptions& o) { return o.engine != Engine::Exact || o.adaptive; }
inline bool uses_exact(const SimulationOptions& o) { return o.engine != Engine::Pairwise; }

}  // namespace detail

/// Executes `fixed` in order, or adaptive proposals when options.adaptive.
/// Contradictions are reported in the result rather than thrown.
inline RunResult simulate(const Dag& truth, const std::optional<Schedule>& fixed, const SimulationOptions& options,
                          std::shared_ptr<const DagSpace> space = nullptr) {
  const auto n = truth.size();
  if (!options.adaptive && !fixed) throw ArgumentError("simulation needs a schedule or adaptive mode");
  if (fixed && fixed->variables() != n) throw ArgumentError("schedule and graph differ in n");
  if (options.collider_rule && n > kDefaultResponseCap) {
    throw CapExceeded("the collider rule needs full oracle responses, capped at n = " +
                          std::to_string(kDefaultResponseCap),
                      kDefaultResponseCap);
  }
  std::optional<ConsistentSet> exact;
  if (detail::uses_exact(options)) {
    check_enumeration_cap(n, options.enumeration_cap);
    if (!space) space = make_space(n, options.enumeration_cap);
    exact.emplace(space);
  }
  std::optional<KnowledgeState> pairwise;
  if (detail::uses_pairwise(options)) pairwise.emplace(n);

  RunResult out;
  out.n = n;
  out.schedule = Schedule(n);

  const auto done = [&] { return (pairwise && pairwise->resolved()) || (exact && exact->singleton()); };

  const auto run_one = [&](const Experiment& e) {
    StepRecord step{e, pair_outcomes(truth, e), 0, std::nullopt};
    if (pairwise) {
      *pairwise = update_pairwise(*pairwise, e, step.outcomes);
      if (options.collider_rule) *pairwise = apply_collider_rule(*pairwise, run_experiment(truth, e));
      step.resolved_pairs = pairwise->resolved_count();
    }
    if (exact) {
      *exact = update_consistent_set(*exact, e, run_experiment(truth, e));
      step.consistent_set_size = exact->size();
    }
    out.schedule.push_back(e);
    out.steps.push_back(std::move(step));
  };

  try {
    if (options.adaptive) {
      const std::size_t limit = options.max_adaptive_steps.value_or(2 * pair_count(n) + 1);
      while (!done() && out.steps.size() < limit) {
        run_one({adaptive_next(*pairwise, options.kmax)});
      }
    } else {
      for (const auto& e : fixed->experiments()) run_one(e);
    }
  } catch (const ContradictionError& err) {
    out.status = RunStatus::Contradiction;
    out.contradiction = "experiment " + std::to_string(out.steps.size()) + ": " + err.what();
    out.pairwise = pairwise;
    if (exact) out.consistent_set_size = exact->size();
    return out;
  }

  out.pairwise = pairwise;
  if (exact) out.consistent_set_size = exact->size();

  std::optional<Dag> from_pairwise;
  std::optional<Dag> from_exact;
  try {
    if (pairwise && options.engine != Engine::Exact && pairwise->resolved()) from_pairwise = extract_dag(*pairwise);
  } catch (const ContradictionError& err) {
    out.status = RunStatus::Contradiction;
    out.contradiction = err.what();
    return out;
  }
  if (exact && exact->singleton()) from_exact = exact->space()[exact->members().front()];

  if (from_pairwise && from_exact && !(*from_pairwise == *from_exact)) {
    out.status = RunStatus::Contradiction;
    out.contradiction = "engines recovered different graphs";
    return out;
  }
  if (from_pairwise || from_exact) {
    out.status = RunStatus::Recovered;
    out.recovered = from_pairwise ? from_pairwise : from_exact;
  }
  return out;
}

struct BenchSummary {
  std::size_t trials = 0;
  std::size_t recovered = 0;
  std::size_t contradictions = 0;
  std::size_t total_experiments = 0;
  std::size_t max_experiments = 0;
  std::size_t bound = 0;
  bool coverage_sufficient = false;

  double recovery_rate() const { return trials == 0 ? 0.0 : static_cast<double>(recovered) / static_cast<double>(trials); }
  double mean_experiments() const {
    return trials == 0 ? 0.0 : static_cast<double>(total_experiments) / static_cast<double>(trials);
  }
};

/// Per-trial graph seeds, drawn from one generator seeded with `seed`.
inline std::vector<std::uint64_t> trial_seeds(std::uint64_t seed, std::size_t trials) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(trials);
  for (auto& s : out) s = rng();
  return out;
}

/// A recovery counts only if the recovered graph equals the truth.
inline BenchSummary bench(std::size_t n, std::size_t trials, double edge_prob, std::uint64_t seed,
                          const std::optional<Schedule>& schedule, const SimulationOptions& options) {
  BenchSummary summary;
  summary.trials = trials;
  if (schedule) summary.coverage_sufficient = coverage_report(*schedule).overall_sufficient();
  std::shared_ptr<const DagSpace> space;
  if (detail::uses_exact(options)) space = make_space(n, options.enumeration_cap);
  for (auto trial_seed : trial_seeds(seed, trials)) {
    const auto truth = random_dag(n, edge_prob, trial_seed);
    const auto result = simulate(truth, schedule, options, space);
    if (result.status == RunStatus::Recovered && *result.recovered == truth) ++summary.recovered;
    if (result.status == RunStatus::Contradiction) ++summary.contradictions;
    summary.total_experiments += result.experiment_count();
    summary.max_experiments = std::max(summary.max_experiments, result.experiment_count());
  }
  return summary;
}

}  // namespace intervene
