#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>

#include "CLI11.hpp"

#include "intervene/intervene.hpp"

using namespace intervene;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitContradiction = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

void emit_json(const Json& j, const std::string& out_path) { emit(j.dump(2) + "\n", out_path); }

Strategy parse_strategy(const std::string& s) {
  if (s == "single") return Strategy::Single;
  if (s == "binary") return Strategy::Binary;
  return Strategy::Kmax;
}

Engine parse_engine(const std::string& s) {
  if (s == "exact") return Engine::Exact;
  if (s == "both") return Engine::Both;
  return Engine::Pairwise;
}

std::string bound_line(std::size_t n, Strategy strategy, std::optional<std::size_t> kmax) {
  switch (strategy) {
    case Strategy::Single: return single_bound_formula(n);
    case Strategy::Binary: return unrestricted_bound_formula(n);
    case Strategy::Kmax: return kmax_bound_formula(n, *kmax);
  }
  return {};
}

std::string set_text(InterventionSet i) {
  std::string out = "{";
  bool first = true;
  for (auto v : i) {
    if (!first) out += ",";
    out += std::to_string(v);
    first = false;
  }
  return out + "}";
}

void check_kmax_flag(const std::string& strategy, const std::optional<std::size_t>& kmax) {
  if (strategy == "kmax" && !kmax) throw UsageError("--strategy kmax requires --kmax");
  if (strategy != "kmax" && kmax) throw UsageError("--kmax is only valid with --strategy kmax");
}

// plan

struct PlanArgs {
  std::size_t n = 0;
  std::string strategy;
  std::optional<std::size_t> kmax;
  std::string out;
};

int run_plan(const PlanArgs& a) {
  check_kmax_flag(a.strategy, a.kmax);
  const auto strategy = parse_strategy(a.strategy);
  const auto s = plan_schedule(a.n, strategy, a.kmax);
  emit(write_schedule_json(s), a.out);
  std::fprintf(stderr, "strategy %s, n = %zu: %zu experiments, bound %s\n", to_string(strategy), a.n, s.size(),
               bound_line(a.n, strategy, a.kmax).c_str());
  for (std::size_t t = 0; t < s.size(); ++t) std::fprintf(stderr, "  E%zu  %s\n", t + 1, set_text(s[t].intervention).c_str());
  return kExitOk;
}

// simulate

struct SimulateArgs {
  std::string dag_path;
  std::optional<std::tuple<std::size_t, double, std::uint64_t>> random;
  std::string schedule_path;
  std::string strategy;
  std::optional<std::size_t> kmax;
  bool adaptive = false;
  bool collider_rule = false;
  std::string engine = "pairwise";
  std::size_t cap = kDefaultEnumerationCap;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const auto start = Clock::now();
  if (a.dag_path.empty() == !a.random) throw UsageError("give exactly one of --dag or --random");
  const int sources = (a.schedule_path.empty() ? 0 : 1) + (a.strategy.empty() ? 0 : 1) + (a.adaptive ? 1 : 0);
  if (sources != 1) throw UsageError("give exactly one of --schedule, --strategy or --adaptive");
  if (!a.strategy.empty()) check_kmax_flag(a.strategy, a.kmax);
  if (!a.schedule_path.empty() && a.kmax) throw UsageError("--kmax does not apply to --schedule");

  const Dag truth = a.random ? random_dag(std::get<0>(*a.random), std::get<1>(*a.random), std::get<2>(*a.random))
                             : read_dag_text(read_file(a.dag_path));
  const auto n = truth.size();

  std::optional<Schedule> schedule;
  if (!a.schedule_path.empty()) schedule = read_schedule_json(read_file(a.schedule_path));
  if (!a.strategy.empty()) schedule = plan_schedule(n, parse_strategy(a.strategy), a.kmax);

  SimulationOptions options;
  options.engine = parse_engine(a.engine);
  options.collider_rule = a.collider_rule;
  options.adaptive = a.adaptive;
  options.kmax = a.adaptive ? a.kmax : std::nullopt;
  options.enumeration_cap = a.cap;

  const auto result = simulate(truth, schedule, options);

  Json params;
  params["n"] = n;
  params["kmax"] = optional_json(a.kmax);
  params["strategy"] = a.adaptive ? Json("adaptive") : a.strategy.empty() ? Json("file") : Json(a.strategy);
  params["seed"] = a.random ? Json(std::get<2>(*a.random)) : Json(nullptr);
  params["edge_prob"] = a.random ? Json(std::get<1>(*a.random)) : Json(nullptr);
  params["engine"] = a.engine;
  params["collider_rule"] = a.collider_rule;

  Json out;
  out["command"] = "simulate";
  out["params"] = std::move(params);
  out["truth"] = write_dag_text(truth);
  const auto body = run_result_json(result);
  for (const auto& [key, value] : body.items()) out[key] = value;
  out["wall_time_ms"] = elapsed_ms(start);
  emit_json(out, a.out);

  std::fprintf(stderr, "%-4s %-20s %-10s %s\n", "step", "intervention", "resolved", "consistent");
  for (std::size_t t = 0; t < result.steps.size(); ++t) {
    const auto& st = result.steps[t];
    const std::string consistent = st.consistent_set_size ? std::to_string(*st.consistent_set_size) : "-";
    std::fprintf(stderr, "%-4zu %-20s %zu/%-8zu %s\n", t + 1, set_text(st.experiment.intervention).c_str(),
                 st.resolved_pairs, pair_count(n), consistent.c_str());
  }
  std::fprintf(stderr, "status: %s after %zu experiments\n", to_string(result.status), result.experiment_count());
  if (result.status == RunStatus::Contradiction) {
    std::fprintf(stderr, "contradiction: %s\n", result.contradiction.c_str());
    return kExitContradiction;
  }
  return kExitOk;
}

// verify

struct VerifyArgs {
  std::size_t n = 0;
  std::optional<std::size_t> max_len;
  std::optional<std::size_t> kmax;
  std::string mode = "both";
  std::size_t cap = kDefaultEnumerationCap;
  bool adaptive = false;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const auto start = Clock::now();
  check_enumeration_cap(a.n, a.cap);
  const auto target = bound_target(a.n, a.kmax);
  const std::size_t max_len = a.max_len.value_or(target.expected);
  const bool sufficiency = a.mode != "necessity";
  const bool necessity = a.mode != "sufficiency";

  ResponseTable responses(make_space(a.n, a.cap));
  bool match = true;

  Json out;
  out["command"] = "verify";
  out["params"] = Json{{"n", a.n}, {"max_len", max_len}, {"kmax", optional_json(a.kmax)}, {"mode", a.mode},
                       {"cap", a.cap}, {"adaptive", a.adaptive}};
  out["dag_count"] = responses.space().size();
  out["theory"] = Json{{"strategy", target.strategy}, {"bound", target.formula}, {"expected", target.expected},
                       {"tight", target.tight}};

  if (sufficiency) {
    const auto result = identifies_all(responses, target.schedule);
    const bool ok = result.identifies && target.schedule.size() <= target.expected;
    match = match && ok;
    Json j{{"schedule", schedule_to_json(target.schedule)},
           {"length", target.schedule.size()},
           {"identifies", result.identifies},
           {"consistent", ok}};
    if (result.witness) j["witness"] = witness_json(*result.witness);
    out["sufficiency"] = std::move(j);
    std::fprintf(stderr, "sufficiency: %s schedule of length %zu %s all %zu DAGs\n", target.strategy.c_str(),
                 target.schedule.size(), result.identifies ? "identifies" : "does NOT identify",
                 responses.space().size());
  }

  if (necessity) {
    const auto result = min_schedule_length(responses, max_len, a.kmax);
    bool ok;
    if (result.length) {
      ok = target.tight ? *result.length == target.expected : *result.length <= target.expected;
    } else {
      // Nothing identifies up to max_len, which theory allows only below the expected length.
      ok = max_len < target.expected;
    }
    match = match && ok;
    Json searched = Json::array();
    for (const auto& s : result.searched) searched.push_back(length_search_json(s, !s.identifying));
    out["necessity"] = Json{{"min_length", optional_json(result.length)},
                            {"example", result.example ? schedule_to_json(*result.example) : Json(nullptr)},
                            {"searched", std::move(searched)},
                            {"consistent", ok}};
    std::fprintf(stderr, "%-7s %-11s %s\n", "length", "candidates", "identifying");
    for (const auto& s : result.searched) {
      std::fprintf(stderr, "%-7zu %-11zu %s\n", s.length, s.candidates, s.identifying ? "yes" : "no");
    }
    if (result.length) {
      std::fprintf(stderr, "necessity: minimum length %zu (theory %s)\n", *result.length, target.formula.c_str());
    } else {
      std::fprintf(stderr, "necessity: no identifying schedule within length %zu (theory %s)\n", max_len,
                   target.formula.c_str());
    }
  }

  if (a.adaptive) {
    const auto depth = min_adaptive_length(responses, max_len, a.kmax);
    out["adaptive"] = Json{{"min_length", optional_json(depth)}};
    if (depth) {
      std::fprintf(stderr, "adaptive: worst-case minimum %zu\n", *depth);
    } else {
      std::fprintf(stderr, "adaptive: none within length %zu\n", max_len);
    }
  }

  out["verdict"] = match ? "MATCH" : "MISMATCH";
  out["wall_time_ms"] = elapsed_ms(start);
  emit_json(out, a.out);
  std::fprintf(stderr, "verdict: %s\n", match ? "MATCH" : "MISMATCH");
  return match ? kExitOk : kExitMismatch;
}

// enumerate

struct EnumerateArgs {
  std::size_t n = 0;
  bool print = false;
  std::size_t cap = kDefaultEnumerationCap;
  std::string out;
};

int run_enumerate(const EnumerateArgs& a) {
  if (a.print && a.n > 4) throw UsageError("--print is limited to n <= 4");
  const auto dags = enumerate_dags(a.n, a.cap);
  Json out;
  out["command"] = "enumerate";
  out["n"] = a.n;
  out["count"] = dags.size();
  if (a.print) {
    Json graphs = Json::array();
    for (const auto& g : dags) graphs.push_back(write_dag_text(g));
    out["graphs"] = std::move(graphs);
  }
  emit_json(out, a.out);
  std::fprintf(stderr, "n = %zu: %zu DAGs\n", a.n, dags.size());
  return kExitOk;
}

// bench

struct BenchArgs {
  std::size_t n = 0;
  std::size_t trials = 100;
  double edge_prob = 0.5;
  std::uint64_t seed = 0;
  std::string strategy;
  std::optional<std::size_t> kmax;
  bool adaptive = false;
  bool collider_rule = false;
  std::string engine = "pairwise";
  std::size_t cap = kDefaultEnumerationCap;
  std::string out;
};

int run_bench(const BenchArgs& a) {
  const auto start = Clock::now();
  if (a.strategy.empty() == !a.adaptive) throw UsageError("give exactly one of --strategy or --adaptive");
  if (!a.strategy.empty()) check_kmax_flag(a.strategy, a.kmax);

  SimulationOptions options;
  options.engine = parse_engine(a.engine);
  options.collider_rule = a.collider_rule;
  options.adaptive = a.adaptive;
  options.kmax = a.adaptive ? a.kmax : std::nullopt;
  options.enumeration_cap = a.cap;
  if (a.n > a.cap && options.engine != Engine::Pairwise) {
    std::fprintf(stderr, "note: n = %zu exceeds the enumeration cap %zu; using the pairwise engine\n", a.n, a.cap);
    options.engine = Engine::Pairwise;
  }

  std::optional<Schedule> schedule;
  std::optional<std::string> bound;
  if (!a.strategy.empty()) {
    const auto strategy = parse_strategy(a.strategy);
    schedule = plan_schedule(a.n, strategy, a.kmax);
    bound = bound_line(a.n, strategy, a.kmax);
  }
  auto summary = bench(a.n, a.trials, a.edge_prob, a.seed, schedule, options);
  if (schedule) summary.bound = strategy_bound(a.n, parse_strategy(a.strategy), a.kmax);

  Json out;
  out["command"] = "bench";
  out["params"] = Json{{"n", a.n},
                       {"kmax", optional_json(a.kmax)},
                       {"strategy", a.adaptive ? std::string("adaptive") : a.strategy},
                       {"seed", a.seed},
                       {"trials", a.trials},
                       {"edge_prob", a.edge_prob},
                       {"engine", to_string(options.engine)},
                       {"collider_rule", a.collider_rule}};
  out["summary"] = bench_json(summary);
  out["bound_line"] = optional_json(bound);
  out["wall_time_ms"] = elapsed_ms(start);
  emit_json(out, a.out);

  std::fprintf(stderr, "%-10s %-10s %-6s %-6s %s\n", "recovered", "contradict", "mean", "max", "bound");
  std::fprintf(stderr, "%zu/%-7zu %-10zu %-6.2f %-6zu %s\n", summary.recovered, summary.trials, summary.contradictions,
               summary.mean_experiments(), summary.max_experiments, bound ? bound->c_str() : "-");

  if (summary.contradictions > 0) return kExitContradiction;
  if (summary.coverage_sufficient && summary.recovered != summary.trials) return kExitMismatch;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan, simulate and verify intervention experiments on causal DAGs"};
  app.require_subcommand(1);
  const auto strategies = CLI::IsMember({"single", "binary", "kmax"});
  const auto engines = CLI::IsMember({"pairwise", "exact", "both"});

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Write an experiment schedule as JSON");
  plan_cmd->add_option("--n", plan.n, "Number of variables")->required();
  plan_cmd->add_option("--strategy", plan.strategy, "single | binary | kmax")->required()->check(strategies);
  plan_cmd->add_option("--kmax", plan.kmax, "Intervention size cap (kmax strategy)");
  plan_cmd->add_option("--out", plan.out, "Output path (default stdout)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a schedule against a true DAG");
  sim_cmd->add_option("--dag", sim.dag_path, "True DAG in text format");
  sim_cmd->add_option("--random", sim.random, "Random true DAG: N EDGE_PROB SEED");
  sim_cmd->add_option("--schedule", sim.schedule_path, "Schedule JSON file");
  sim_cmd->add_option("--strategy", sim.strategy, "single | binary | kmax")->check(strategies);
  sim_cmd->add_option("--kmax", sim.kmax, "Intervention size cap");
  sim_cmd->add_flag("--adaptive", sim.adaptive, "Choose experiments greedily from current knowledge");
  sim_cmd->add_flag("--collider-rule", sim.collider_rule, "Also orient edges from unshielded colliders");
  sim_cmd->add_option("--engine", sim.engine, "pairwise | exact | both")->check(engines);
  sim_cmd->add_option("--cap", sim.cap, "Largest n for the exact engine");
  sim_cmd->add_option("--out", sim.out, "Output path (default stdout)");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Check the length bounds by exhaustive search");
  ver_cmd->add_option("--n", ver.n, "Number of variables")->required();
  ver_cmd->add_option("--max-len", ver.max_len, "Longest schedule searched (default: theoretical length)");
  ver_cmd->add_option("--kmax", ver.kmax, "Intervention size cap");
  ver_cmd->add_option("--mode", ver.mode, "sufficiency | necessity | both")
      ->check(CLI::IsMember({"sufficiency", "necessity", "both"}));
  ver_cmd->add_option("--cap", ver.cap, "Largest n accepted");
  ver_cmd->add_flag("--adaptive", ver.adaptive, "Also compute the adaptive worst-case minimum (n <= 3)");
  ver_cmd->add_option("--out", ver.out, "Output path (default stdout)");

  EnumerateArgs en;
  auto* en_cmd = app.add_subcommand("enumerate", "Count (and optionally list) all DAGs on n variables");
  en_cmd->add_option("--n", en.n, "Number of variables")->required();
  en_cmd->add_flag("--print", en.print, "List every graph (n <= 4)");
  en_cmd->add_option("--cap", en.cap, "Largest n accepted");
  en_cmd->add_option("--out", en.out, "Output path (default stdout)");

  BenchArgs be;
  auto* be_cmd = app.add_subcommand("bench", "Recovery statistics over seeded random DAGs");
  be_cmd->add_option("--n", be.n, "Number of variables")->required();
  be_cmd->add_option("--trials", be.trials, "Number of random graphs");
  be_cmd->add_option("--edge-prob", be.edge_prob, "Edge probability")->check(CLI::Range(0.0, 1.0));
  be_cmd->add_option("--seed", be.seed, "Seed for the graph generator")->required();
  be_cmd->add_option("--strategy", be.strategy, "single | binary | kmax")->check(strategies);
  be_cmd->add_option("--kmax", be.kmax, "Intervention size cap");
  be_cmd->add_flag("--adaptive", be.adaptive, "Choose experiments greedily");
  be_cmd->add_flag("--collider-rule", be.collider_rule, "Also orient edges from unshielded colliders");
  be_cmd->add_option("--engine", be.engine, "pairwise | exact | both")->check(engines);
  be_cmd->add_option("--cap", be.cap, "Largest n for the exact engine");
  be_cmd->add_option("--out", be.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*plan_cmd) return run_plan(plan);
    if (*sim_cmd) return run_simulate(sim);
    if (*ver_cmd) return run_verify(ver);
    if (*en_cmd) return run_enumerate(en);
    if (*be_cmd) return run_bench(be);
  } catch (const ContradictionError& e) {
    std::cerr << "contradiction: " << e.what() << "\n";
    return kExitContradiction;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
