// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "intervene/intervene.hpp"
#include "oracles.hpp"

using namespace intervene;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::size_t choose2(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

Outcome test_kind_counts() {
  if (!(count_test_kinds(8, 4) == TestKindCounts{16, 6, 6})) return fail("(8,4) is not (16,6,6)");
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto c = count_test_kinds(n, k);
      const TestKindCounts formula{k * (n - k), choose2(n - k), choose2(k)};
      if (!(c == formula)) return fail("formula mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k));
      if (c.directional + c.adjacency + c.zero_information != choose2(n)) return fail("counts do not sum to C(n,2)");
      // Independent tally over a concrete k-set.
      TestKindCounts tally;
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
          const bool ix = x < k;
          const bool iy = y < k;
          if (ix && iy) ++tally.zero_information;
          else if (!ix && !iy) ++tally.adjacency;
          else ++tally.directional;
        }
      }
      if (!(tally == c)) return fail("concrete tally differs at n=" + std::to_string(n) + " k=" + std::to_string(k));
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " (n,k) cases"};
}

Outcome binary_sufficiency() {
  std::size_t runs = 0;
  SimulationOptions o;
  o.engine = Engine::Both;
  for (std::size_t n : {3, 4}) {
    const auto space = make_space(n);
    const auto s = binary_codeword_schedule(n);
    for (const auto& truth : space->dags()) {
      const auto r = simulate(truth, s, o, space);
      if (r.status != RunStatus::Recovered || !(*r.recovered == truth)) {
        return fail("n=" + std::to_string(n) + " missed\n" + write_dag_text(truth));
      }
      if (r.consistent_set_size != 1u || !r.pairwise || !r.pairwise->resolved()) {
        return fail("an engine did not finish on\n" + write_dag_text(truth));
      }
      ++runs;
    }
  }
  return {true, std::to_string(runs) + "/568 DAGs recovered by both engines"};
}

// Two DAGs are confused by a schedule iff every experiment gives identical
// statements; checked directly against the oracle, not the interned table.
bool confused(const Witness& w, const Schedule& s) {
  if (w.first == w.second) return false;
  for (const auto& e : s.experiments()) {
    if (run_experiment(w.first, e).statements != run_experiment(w.second, e).statements) return false;
  }
  return true;
}

Outcome necessity() {
  const std::size_t expected[] = {2, 2, 3};
  std::string detail;
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto r = min_schedule_length(n, 4);
    if (!r.length) return fail("no identifying schedule found at n=" + std::to_string(n));
    if (*r.length != expected[n - 2] || *r.length != unrestricted_bound(n)) {
      return fail("n=" + std::to_string(n) + " minimum is " + std::to_string(*r.length));
    }
    const auto* below = r.below_minimum();
    if (!below || below->identifying || below->candidates == 0 || below->defeats.size() != below->candidates) {
      return fail("length-(min-1) failures incomplete at n=" + std::to_string(n));
    }
    for (const auto& d : below->defeats) {
      if (!confused(d.witness, d.schedule)) return fail("bogus witness at n=" + std::to_string(n));
    }
    if (!identifies_all(*r.example)) return fail("example schedule does not identify");
    detail += "n=" + std::to_string(n) + ":" + std::to_string(*r.length) + " (" +
              std::to_string(below->defeats.size()) + " witnessed failures) ";
  }
  detail.pop_back();
  return {true, detail};
}

Outcome worked_example() {
  const auto g = make_dag(3, {{1, 0}, {0, 2}, {1, 2}});
  SimulationOptions o;
  o.engine = Engine::Both;
  const auto r = simulate(g, Schedule(3, {{{0}}, {{1}}}), o);
  if (r.steps.size() != 2 || r.steps[0].consistent_set_size != 2u || r.steps[1].consistent_set_size != 1u) {
    return fail("consistent-set sizes are not [2, 1]");
  }
  if (r.status != RunStatus::Recovered || !(*r.recovered == g)) return fail("G not recovered");
  return {true, "sizes [2, 1], G recovered"};
}

Outcome recovers_all(const Schedule& s, const std::vector<Dag>& truths, std::size_t& runs) {
  for (const auto& truth : truths) {
    const auto r = simulate(truth, s, {});
    if (r.status != RunStatus::Recovered || !(*r.recovered == truth)) {
      return fail("n=" + std::to_string(truth.size()) + " missed\n" + write_dag_text(truth));
    }
    ++runs;
  }
  return {};
}

std::vector<Dag> random_dags(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<Dag> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_dag(n, density(rng), rng()));
  return out;
}

Outcome single_interventions() {
  std::size_t runs = 0;
  for (std::size_t n : {3, 4}) {
    if (auto o = recovers_all(single_intervention_schedule(n), enumerate_dags(n), runs); !o.ok) return o;
  }
  for (std::size_t n : {6, 8}) {
    if (auto o = recovers_all(single_intervention_schedule(n), random_dags(n, 200, 1000 + n), runs); !o.ok) return o;
  }
  return {true, std::to_string(runs) + " runs, all recovered"};
}

Outcome kmax_lengths() {
  struct Case {
    std::size_t n, kmax, length;
    bool exact;
  };
  std::string detail;
  for (const auto& c : {Case{8, 2, 5, true}, Case{16, 4, 7, true}, Case{12, 3, 7, false}}) {
    const auto s = kmax_schedule(c.n, c.kmax);
    if (c.exact ? s.size() != c.length : s.size() > c.length) {
      return fail("(" + std::to_string(c.n) + "," + std::to_string(c.kmax) + ") has length " + std::to_string(s.size()));
    }
    if (s.largest_intervention() > c.kmax) return fail("cap exceeded");
    const auto b = bench(c.n, 100, 0.5, c.n * 31 + c.kmax, s, {});
    if (b.recovered != 100) return fail("only " + std::to_string(b.recovered) + "/100 recovered");
    detail += "(" + std::to_string(c.n) + "," + std::to_string(c.kmax) + ")=" + std::to_string(s.size()) + " 100/100 ";
  }
  detail.pop_back();
  return {true, detail};
}

Outcome oracle_soundness() {
  std::size_t queries = 0;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& g : enumerate_dags(n)) {
      for (VariableId x = 0; x < n; ++x) {
        for (VariableId y = x + 1; y < n; ++y) {
          bool separable = false;
          const auto rest = VariableSet::all(n).without(VariableSet{x, y});
          for (std::uint64_t sub = 0;; sub = (sub - rest.bits()) & rest.bits()) {
            const auto z = VariableSet::from_bits(sub);
            const bool fast = d_separated(g, x, y, z);
            if (fast != testing::brute_force_d_separated(g, x, y, testing::to_std_set(z))) {
              return fail("d-separation mismatch on\n" + write_dag_text(g));
            }
            separable = separable || fast;
            ++queries;
            if (((sub - rest.bits()) & rest.bits()) == 0) break;
          }
          if (separable == g.adjacent(x, y)) return fail("adjacency link broken on\n" + write_dag_text(g));
        }
      }
    }
  }
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<VariableId> var(0, 5);
  std::bernoulli_distribution coin(0.4);
  for (const auto& g : random_dags(6, 200, 6)) {
    for (int q = 0; q < 40; ++q) {
      const auto x = var(rng);
      auto y = var(rng);
      if (x == y) y = (y + 1) % 6;
      VariableSet z;
      for (VariableId v = 0; v < 6; ++v)
        if (v != x && v != y && coin(rng)) z.insert(v);
      if (d_separated(g, x, y, z) != testing::brute_force_d_separated(g, x, y, testing::to_std_set(z))) {
        return fail("d-separation mismatch on random graph\n" + write_dag_text(g));
      }
      ++queries;
    }
  }
  return {true, std::to_string(queries) + " queries, 0 discrepancies"};
}

Outcome coverage_laws() {
  std::size_t kmax_cases = 0;
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto s = binary_codeword_schedule(n);
    const std::size_t m = ceil_log2(n);
    if (s.size() != m + (is_power_of_two(n) ? 1 : 0)) return fail("binary length wrong at n=" + std::to_string(n));
    if (!coverage_report(s).overall_sufficient()) return fail("binary coverage fails at n=" + std::to_string(n));
    if (!is_power_of_two(n)) {
      for (VariableId v = 0; v < n; ++v) {
        bool every = true;
        for (std::size_t t = 0; t < s.size(); ++t) every = every && s[t].intervention.contains(v);
        if (every) return fail("variable intervened in every experiment at n=" + std::to_string(n));
      }
    }
    for (std::size_t kmax = 1; 2 * kmax < n; ++kmax) {
      const auto k = kmax_schedule(n, kmax);
      if (k.largest_intervention() > kmax) return fail("kmax cap exceeded at n=" + std::to_string(n));
      if (!coverage_report(k).overall_sufficient()) return fail("kmax coverage fails at n=" + std::to_string(n));
      ++kmax_cases;
    }
  }
  return {true, "n=2..64, " + std::to_string(kmax_cases) + " kmax schedules"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "test-kind counts K(N-K), C(N-K,2), C(K,2)", 1, test_kind_counts},
      {2, "binary codeword schedule recovers every DAG, n=3,4", 60, binary_sufficiency},
      {3, "minimum identifying lengths 2,2,3 with witnesses", 600, necessity},
      {4, "worked example: sizes [2,1], graph recovered", 1, worked_example},
      {5, "single interventions recover all DAGs", 60, single_interventions},
      {6, "kmax schedule lengths and recovery", 60, kmax_lengths},
      {7, "d-separation soundness and adjacency link", 60, oracle_soundness},
      {8, "coverage laws for n <= 64", 10, coverage_laws},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_s) o = fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s));
    if (!o.ok) ++failures;
    std::printf("[%s] %d. %s (%.3f s): %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
