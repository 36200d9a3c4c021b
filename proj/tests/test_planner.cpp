#include <gtest/gtest.h>

#include <set>

#include "intervene/planner.hpp"

namespace intervene {
namespace {

std::vector<std::vector<VariableId>> sets_of(const Schedule& s) {
  std::vector<std::vector<VariableId>> out;
  for (const auto& e : s.experiments()) out.push_back(e.intervention.members());
  return out;
}

using Sets = std::vector<std::vector<VariableId>>;

TEST(SingleInterventionSchedule, Shapes) {
  EXPECT_EQ(sets_of(single_intervention_schedule(3)), (Sets{{0}, {1}}));
  EXPECT_EQ(sets_of(single_intervention_schedule(2)), (Sets{{0}}));
  EXPECT_EQ(sets_of(single_intervention_schedule(5)), (Sets{{0}, {1}, {2}, {3}}));
  EXPECT_FALSE(coverage_report(single_intervention_schedule(2)).overall_sufficient());
  EXPECT_THROW(single_intervention_schedule(1), ArgumentError);
}

TEST(BinaryCodewordSchedule, EightVariables) {
  auto s = binary_codeword_schedule(8);
  EXPECT_EQ(sets_of(s), (Sets{{1, 3, 5, 7}, {2, 3, 6, 7}, {4, 5, 6, 7}, {}}));
  for (std::size_t t = 0; t < 3; ++t) EXPECT_TRUE(s[t].intervention.contains(7));
}

TEST(BinaryCodewordSchedule, SevenVariablesAvoidAllOnes) {
  auto s = binary_codeword_schedule(7);
  ASSERT_EQ(s.size(), 3u);
  for (const auto& e : s.experiments()) EXPECT_FALSE(e.null());
  for (VariableId v = 0; v < 7; ++v) {
    std::size_t hits = 0;
    for (const auto& e : s.experiments()) hits += e.intervention.contains(v) ? 1 : 0;
    EXPECT_LT(hits, 3u);
  }
}

TEST(BinaryCodewordSchedule, TwoVariables) {
  // Codeword construction: variable 1 carries the single set bit.
  EXPECT_EQ(sets_of(binary_codeword_schedule(2)), (Sets{{1}, {}}));
}

TEST(BinaryCodewordSchedule, LengthCoverageAndCodewordLaws) {
  for (std::size_t n = 2; n <= 64; ++n) {
    auto s = binary_codeword_schedule(n);
    const std::size_t m = ceil_log2(n);
    EXPECT_EQ(s.size(), m + (is_power_of_two(n) ? 1 : 0)) << n;
    EXPECT_EQ(s.size(), unrestricted_bound(n));
    EXPECT_TRUE(coverage_report(s).overall_sufficient()) << n;
    std::set<std::uint64_t> patterns;
    for (VariableId v = 0; v < n; ++v) {
      std::uint64_t pattern = 0;
      for (std::size_t t = 0; t < m; ++t)
        if (s[t].intervention.contains(v)) pattern |= std::uint64_t{1} << t;
      EXPECT_TRUE(patterns.insert(pattern).second) << "shared codeword at n=" << n;
      if (!is_power_of_two(n)) {
        EXPECT_NE(pattern, (std::uint64_t{1} << m) - 1) << "all-ones at n=" << n;
      }
    }
  }
}

TEST(KmaxSchedule, KnownLengths) {
  EXPECT_EQ(kmax_schedule(8, 2).size(), 5u);
  EXPECT_EQ(kmax_schedule(16, 4).size(), 7u);
  EXPECT_LE(kmax_schedule(12, 3).size(), 7u);
  EXPECT_EQ(sets_of(kmax_schedule(8, 2)), (Sets{{0, 1}, {2, 3}, {4, 5}, {1, 3}, {5, 7}}));
}

TEST(KmaxSchedule, RejectsLargeCap) {
  EXPECT_THROW(kmax_schedule(8, 4), ArgumentError);
  EXPECT_THROW(kmax_schedule(8, 0), ArgumentError);
  try {
    kmax_schedule(6, 3);
  } catch (const ArgumentError& err) {
    EXPECT_NE(std::string(err.what()).find("binary_codeword_schedule"), std::string::npos);
  }
}

TEST(KmaxSchedule, CapCoverageAndLengthLaws) {
  for (std::size_t n = 3; n <= 64; ++n) {
    for (std::size_t kmax = 1; 2 * kmax < n; ++kmax) {
      auto s = kmax_schedule(n, kmax);
      EXPECT_LE(s.largest_intervention(), kmax) << n << "," << kmax;
      EXPECT_TRUE(coverage_report(s).overall_sufficient()) << n << "," << kmax;
      EXPECT_LE(s.size(), kmax_bound(n, kmax)) << n << "," << kmax;
      const std::size_t p = n / kmax;
      if (n % kmax == 0 && p % 2 == 0) {
        // (n/kmax - 1) + n/(2 kmax)·⌈log₂ kmax⌉
        EXPECT_EQ(s.size(), (p - 1) + (n / (2 * kmax)) * ceil_log2(kmax)) << n << "," << kmax;
      }
    }
  }
}

TEST(CoverageReport, Cases) {
  EXPECT_EQ(coverage_report(binary_codeword_schedule(8)).pairs.size(), 28u);
  EXPECT_TRUE(coverage_report(binary_codeword_schedule(8)).overall_sufficient());

  auto one = coverage_report(Schedule(2, {{{0}}}));
  ASSERT_EQ(one.pairs.size(), 1u);
  EXPECT_EQ(one.pairs[0].directional_from_x, 1u);
  EXPECT_FALSE(one.pairs[0].sufficient());

  auto passive = coverage_report(Schedule(5, {{}, {}}));
  EXPECT_EQ(passive.insufficient_count(), 10u);
  for (const auto& p : passive.pairs) EXPECT_EQ(p.adjacency, 2u);
}

TEST(CoverageReport, SingleInterventionSufficientFromThree) {
  for (std::size_t n = 3; n <= 64; ++n) EXPECT_TRUE(coverage_report(single_intervention_schedule(n)).overall_sufficient());
}

TEST(AdaptiveNext, PicksDirectionalTestForPossibleEdge) {
  auto s = KnowledgeState(2).narrowed(
      0, 1, PairState::from_bits(static_cast<std::uint8_t>(Relation::XToY) | static_cast<std::uint8_t>(Relation::NoEdge)));
  EXPECT_EQ(adaptive_next(s), (InterventionSet{0}));
}

TEST(AdaptiveNext, ResolvedStateProposesNothing) {
  KnowledgeState s(3);
  for (const auto& pr : all_pairs(3)) s = s.narrowed(pr.x, pr.y, PairState::only(Relation::NoEdge));
  EXPECT_TRUE(adaptive_next(s).empty());
}

TEST(AdaptiveNext, FreshStateFillsCap) {
  // Brute force over every set of size <= 2 on n = 4: the best directional
  // count is 4, reached only by 2-element sets.
  KnowledgeState fresh(4);
  std::size_t best = 0;
  for (std::uint64_t m = 0; m < 16; ++m) {
    auto i = VariableSet::from_bits(m);
    if (i.size() <= 2) best = std::max(best, score_intervention(fresh, i).directional);
  }
  EXPECT_EQ(best, 4u);
  auto pick = adaptive_next(fresh, 2);
  EXPECT_EQ(pick.size(), 2u);
  EXPECT_EQ(score_intervention(fresh, pick).directional, best);
  EXPECT_EQ(pick, (InterventionSet{0, 1}));
}

TEST(AdaptiveNext, RespectsCap) {
  KnowledgeState fresh(10);
  EXPECT_LE(adaptive_next(fresh, 3).size(), 3u);
  EXPECT_EQ(adaptive_next(fresh).size(), 5u);
}

}  // namespace
}  // namespace intervene
