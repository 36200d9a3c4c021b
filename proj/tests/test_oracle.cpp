#include <gtest/gtest.h>

#include "intervene/enumerate.hpp"
#include "intervene/oracle.hpp"

namespace intervene {
namespace {

Dag worked_example() { return make_dag(3, {{1, 0}, {0, 2}, {1, 2}}); }

TEST(RunExperiment, WorkedExampleHasSingleIndependence) {
  auto r = run_experiment(worked_example(), {{0}});
  ASSERT_EQ(r.statements.size(), 6u);
  std::vector<CiStatement> independent;
  for (const auto& s : r.statements)
    if (s.independent) independent.push_back(s);
  ASSERT_EQ(independent.size(), 1u);
  EXPECT_EQ(independent[0], (CiStatement{0, 1, {}, true}));
  // Conditioning on the collider V3 makes V1 and V2 dependent.
  EXPECT_EQ(r.statements[1], (CiStatement{0, 1, {2}, false}));
}

TEST(RunExperiment, EmptyAndCompleteGraphs) {
  for (const auto& s : run_experiment(empty_dag(4), {}).statements) EXPECT_TRUE(s.independent);
  for (const auto& s : run_experiment(complete_dag(3), {}).statements) EXPECT_FALSE(s.independent);
}

TEST(RunExperiment, CompleteAndCanonical) {
  for (std::size_t n = 2; n <= 6; ++n) {
    auto r = run_experiment(random_dag(n, 0.5, n), {{0}});
    EXPECT_EQ(r.statements.size(), pair_count(n) * (std::size_t{1} << (n - 2)));
    for (std::size_t i = 0; i < r.statements.size(); ++i) {
      const auto& s = r.statements[i];
      EXPECT_LT(s.x, s.y);
      EXPECT_FALSE(s.z.contains(s.x) || s.z.contains(s.y));
      if (i > 0) {
        const auto& p = r.statements[i - 1];
        EXPECT_TRUE(std::tie(p.x, p.y) < std::tie(s.x, s.y) || p.z.bits() < s.z.bits());
      }
    }
  }
}

TEST(RunExperiment, RefusesAboveResponseCap) {
  EXPECT_THROW(run_experiment(empty_dag(17), {}), CapExceeded);
  EXPECT_THROW(run_experiment(empty_dag(5), {}, 4), CapExceeded);
}

TEST(IndependenceKey, MatchesStatements) {
  for (const auto& g : enumerate_dags(3)) {
    for (std::uint64_t m = 0; m < 8; ++m) {
      Experiment e{VariableSet::from_bits(m)};
      EXPECT_EQ(independence_key(run_experiment(g, e)), independence_key(manipulated_graph(g, e.intervention)));
    }
  }
}

TEST(PairOutcomes, WorkedExample) {
  auto out = pair_outcomes(worked_example(), {{0}});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], (PairOutcome{0, 1, TestKind::DirectionalFromX, Verdict::NoEdgeFromX}));
  EXPECT_EQ(out[1], (PairOutcome{0, 2, TestKind::DirectionalFromX, Verdict::EdgeXToY}));
  EXPECT_EQ(out[2], (PairOutcome{1, 2, TestKind::Adjacency, Verdict::Adjacent}));
}

TEST(PairOutcomes, FullInterventionIsZeroInformation) {
  for (const auto& o : pair_outcomes(random_dag(5, 0.7, 3), {VariableSet::all(5)})) {
    EXPECT_EQ(o.kind, TestKind::ZeroInformation);
    EXPECT_EQ(o.verdict, Verdict::None);
  }
}

TEST(PairOutcomes, EmptyGraph) {
  auto out = pair_outcomes(empty_dag(3), {{0}});
  EXPECT_EQ(out[0].verdict, Verdict::NoEdgeFromX);
  EXPECT_EQ(out[1].verdict, Verdict::NoEdgeFromX);
  EXPECT_EQ(out[2].verdict, Verdict::NotAdjacent);
}

TEST(PairOutcomes, CoherentWithResponsesExhaustive) {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& g : enumerate_dags(n)) {
      for (std::uint64_t m = 0; m < (1u << n); ++m) {
        Experiment e{VariableSet::from_bits(m)};
        ASSERT_EQ(pair_outcomes(g, e), outcomes_from_response(n, run_experiment(g, e)));
      }
    }
  }
}

TEST(PairOutcomes, DirectionalVerdictsAreSoundExhaustive) {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const auto& g : enumerate_dags(n)) {
      for (std::uint64_t m = 0; m < (1u << n); ++m) {
        Experiment e{VariableSet::from_bits(m)};
        for (const auto& o : pair_outcomes(g, e)) {
          if (o.kind == TestKind::DirectionalFromX) {
            EXPECT_EQ(o.verdict == Verdict::EdgeXToY, g.has_edge(o.x, o.y));
          } else if (o.kind == TestKind::DirectionalFromY) {
            EXPECT_EQ(o.verdict == Verdict::EdgeYToX, g.has_edge(o.y, o.x));
          } else if (o.kind == TestKind::Adjacency) {
            // Adjacency verdicts reflect g alone, whatever else is intervened.
            EXPECT_EQ(o.verdict == Verdict::Adjacent, g.adjacent(o.x, o.y));
          }
        }
      }
    }
  }
}

TEST(CountTestKinds, Formulas) {
  EXPECT_EQ(count_test_kinds(8, 4), (TestKindCounts{16, 6, 6}));
  EXPECT_EQ(count_test_kinds(3, 1), (TestKindCounts{2, 1, 0}));
  EXPECT_EQ(count_test_kinds(7, 0), (TestKindCounts{0, 21, 0}));
  EXPECT_THROW(count_test_kinds(3, 4), ArgumentError);
}

TEST(CountTestKinds, PartitionLawAndMaximum) {
  for (std::size_t n = 2; n <= 12; ++n) {
    std::size_t best = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      auto c = count_test_kinds(n, k);
      EXPECT_EQ(c.directional + c.adjacency + c.zero_information, pair_count(n));
      best = std::max(best, c.directional);
      // Agrees with classifying every pair of a concrete k-intervention.
      TestKindCounts counted;
      VariableSet i;
      for (VariableId v = 0; v < k; ++v) i.insert(v);
      for (const auto& pr : all_pairs(n)) {
        auto kind = classify_pair(i, pr.x, pr.y);
        if (kind == TestKind::Adjacency) ++counted.adjacency;
        else if (kind == TestKind::ZeroInformation) ++counted.zero_information;
        else ++counted.directional;
      }
      EXPECT_EQ(counted, c);
    }
    EXPECT_EQ(count_test_kinds(n, n / 2).directional, best);
    EXPECT_EQ(count_test_kinds(n, (n + 1) / 2).directional, best);
  }
}

}  // namespace
}  // namespace intervene
