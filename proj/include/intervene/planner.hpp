#pragma once

// Non-adaptive experiment schedules, two-test coverage analysis, and a
// greedy one-step proposer for adaptive runs.

#include <algorithm>
#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "intervene/knowledge.hpp"
#include "intervene/oracle.hpp"

namespace intervene {

class Schedule {
 public:
  explicit Schedule(std::size_t n, std::vector<Experiment> experiments = {}) : n_(n), experiments_(std::move(experiments)) {
    if (n == 0 || n > kMaxVariables) throw ArgumentError("schedule needs 1..64 variables");
    for (const auto& e : experiments_) check(e);
  }

  std::size_t variables() const { return n_; }
  std::size_t size() const { return experiments_.size(); }
  const std::vector<Experiment>& experiments() const { return experiments_; }
  const Experiment& operator[](std::size_t i) const { return experiments_[i]; }

  void push_back(const Experiment& e) {
    check(e);
    experiments_.push_back(e);
  }

  std::size_t largest_intervention() const {
    std::size_t m = 0;
    for (const auto& e : experiments_) m = std::max(m, e.intervention.size());
    return m;
  }

  bool operator==(const Schedule&) const = default;

 private:
  void check(const Experiment& e) const {
    if (!e.intervention.subset_of(VariableSet::all(n_))) {
      throw ArgumentError("experiment intervenes on a variable outside [0, " + std::to_string(n_) + ")");
    }
  }

  std::size_t n_;
  std::vector<Experiment> experiments_;
};

constexpr std::size_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }
constexpr bool is_power_of_two(std::size_t n) { return std::has_single_bit(n); }

/// ⌈log₂ n⌉ + [n is a power of 2]
constexpr std::size_t unrestricted_bound(std::size_t n) { return ceil_log2(n) + (is_power_of_two(n) ? 1 : 0); }

/// (p - 1) + ⌈p/2⌉·⌈log₂ kmax⌉ with p = ⌈n/kmax⌉. Equals
/// (n/kmax - 1) + n/(2·kmax)·log₂ kmax whenever kmax divides n into an even
/// number of blocks and kmax is a power of 2.
constexpr std::size_t kmax_bound(std::size_t n, std::size_t kmax) {
  const std::size_t p = (n + kmax - 1) / kmax;
  return (p - 1) + ((p + 1) / 2) * ceil_log2(kmax);
}

// Human-readable bound lines, e.g. "⌈log₂8⌉+1 = 4".
inline std::string unrestricted_bound_formula(std::size_t n) {
  return "⌈log₂" + std::to_string(n) + "⌉" + (is_power_of_two(n) ? "+1" : "") + " = " +
         std::to_string(unrestricted_bound(n));
}

inline std::string kmax_bound_formula(std::size_t n, std::size_t kmax) {
  const std::size_t p = (n + kmax - 1) / kmax;
  return "(" + std::to_string(p) + "-1) + " + std::to_string((p + 1) / 2) + "·⌈log₂" + std::to_string(kmax) +
         "⌉ = " + std::to_string(kmax_bound(n, kmax));
}

inline std::string single_bound_formula(std::size_t n) {
  return std::to_string(n) + "-1 = " + std::to_string(n - 1);
}

/// Intervene on {t} for t = 0..n-2.
inline Schedule single_intervention_schedule(std::size_t n) {
  if (n < 2) throw ArgumentError("single-intervention schedule needs n >= 2");
  Schedule s(n);
  for (VariableId t = 0; t + 1 < n; ++t) s.push_back({VariableSet{t}});
  return s;
}

/// Variable v carries codeword v; experiment t intervenes on the variables
/// whose bit t is set. A trailing null experiment is added only when n is a
/// power of 2, where the all-ones codeword cannot be avoided.
inline Schedule binary_codeword_schedule(std::size_t n) {
  if (n < 2) throw ArgumentError("binary codeword schedule needs n >= 2");
  const auto bits = ceil_log2(n);
  Schedule s(n);
  for (std::size_t t = 0; t < bits; ++t) {
    VariableSet members;
    for (VariableId v = 0; v < n; ++v)
      if ((v >> t) & 1U) members.insert(v);
    s.push_back({members});
  }
  if (is_power_of_two(n)) s.push_back({});
  return s;
}

/// Contiguous blocks of near-equal size, larger blocks first.
inline std::vector<std::vector<VariableId>> partition_blocks(std::size_t n, std::size_t blocks) {
  std::vector<std::vector<VariableId>> out(blocks);
  const std::size_t base = n / blocks;
  const std::size_t extra = n % blocks;
  VariableId next = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) out[b].push_back(next++);
  }
  return out;
}

/// Schedule respecting |I| <= kmax < n/2: whole-block interventions on all
/// but the last of ⌈n/kmax⌉ blocks, then codeword splits inside two blocks
/// at a time.
inline Schedule kmax_schedule(std::size_t n, std::size_t kmax) {
  if (kmax == 0) throw ArgumentError("kmax must be at least 1");
  if (2 * kmax >= n) {
    throw ArgumentError("kmax = " + std::to_string(kmax) + " is not below n/2 = " + std::to_string(n) +
                        "/2; use binary_codeword_schedule instead");
  }
  const std::size_t p = (n + kmax - 1) / kmax;
  const auto blocks = partition_blocks(n, p);
  Schedule s(n);
  for (std::size_t b = 0; b + 1 < p; ++b) s.push_back({VariableSet::from_members(blocks[b])});

  // Codeword bit t of a block of size m intervenes on at most ⌊m/2⌋ members,
  // so two blocks together stay within kmax.
  for (std::size_t b = 0; b < p; b += 2) {
    const auto& first = blocks[b];
    static const std::vector<VariableId> kNone;
    const auto& second = b + 1 < p ? blocks[b + 1] : kNone;
    const std::size_t rounds = std::max(ceil_log2(first.size()), ceil_log2(second.size()));
    for (std::size_t t = 0; t < rounds; ++t) {
      VariableSet members;
      for (const auto* block : {&first, &second})
        for (std::size_t local = 0; local < block->size(); ++local)
          if ((local >> t) & 1U) members.insert((*block)[local]);
      s.push_back({members});
    }
  }
  return s;
}

struct PairCoverage {
  VariablePair pair;
  std::size_t directional_from_x = 0;
  std::size_t directional_from_y = 0;
  std::size_t adjacency = 0;
  std::size_t zero_information = 0;

  /// Two opposing directional tests, or a directional and an adjacency test.
  bool sufficient() const {
    const bool opposing = directional_from_x > 0 && directional_from_y > 0;
    const bool mixed = (directional_from_x + directional_from_y) > 0 && adjacency > 0;
    return opposing || mixed;
  }
};

struct CoverageReport {
  std::vector<PairCoverage> pairs;

  bool overall_sufficient() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const PairCoverage& p) { return p.sufficient(); });
  }
  std::size_t insufficient_count() const {
    return static_cast<std::size_t>(
        std::count_if(pairs.begin(), pairs.end(), [](const PairCoverage& p) { return !p.sufficient(); }));
  }
};

inline CoverageReport coverage_report(const Schedule& s) {
  CoverageReport report;
  for (const auto& pr : all_pairs(s.variables())) {
    PairCoverage c{pr};
    for (const auto& e : s.experiments()) {
      switch (classify_pair(e.intervention, pr.x, pr.y)) {
        case TestKind::DirectionalFromX: ++c.directional_from_x; break;
        case TestKind::DirectionalFromY: ++c.directional_from_y; break;
        case TestKind::Adjacency: ++c.adjacency; break;
        case TestKind::ZeroInformation: ++c.zero_information; break;
      }
    }
    report.pairs.push_back(c);
  }
  return report;
}

/// Usefulness of a candidate intervention against the current lattice:
/// how many unresolved pairs get a directional test that can split their
/// possibilities, then how many get a useful adjacency test.
struct ProposalScore {
  std::size_t directional = 0;
  std::size_t adjacency = 0;

  bool zero() const { return directional == 0 && adjacency == 0; }
  auto operator<=>(const ProposalScore&) const = default;
};

inline ProposalScore score_intervention(const KnowledgeState& state, InterventionSet candidate) {
  ProposalScore score;
  const auto n = state.variables();
  for (VariableId x = 0; x < n; ++x) {
    for (VariableId y = x + 1; y < n; ++y) {
      const auto& p = state.at(x, y);
      if (p.resolved()) continue;
      switch (classify_pair(candidate, x, y)) {
        // From x: separates {x -> y} from the rest, so useful iff it is possible.
        case TestKind::DirectionalFromX: score.directional += p.allows(Relation::XToY) ? 1 : 0; break;
        case TestKind::DirectionalFromY: score.directional += p.allows(Relation::YToX) ? 1 : 0; break;
        case TestKind::Adjacency: score.adjacency += p.allows(Relation::NoEdge) ? 1 : 0; break;
        case TestKind::ZeroInformation: break;
      }
    }
  }
  return score;
}

/// Greedy proposer: starting from ∅, repeatedly add the lowest-index variable
/// giving the largest strict score improvement, up to kmax members. Any
/// unresolved pair admits a useful directional test, so the result is ∅ only
/// once the state is resolved (or kmax is 0).
inline InterventionSet adaptive_next(const KnowledgeState& state, std::optional<std::size_t> kmax = std::nullopt) {
  const auto n = state.variables();
  const std::size_t cap = std::min(kmax.value_or(n), n);
  InterventionSet chosen;
  ProposalScore best = score_intervention(state, chosen);
  while (chosen.size() < cap) {
    std::optional<VariableId> pick;
    ProposalScore pick_score = best;
    for (VariableId v = 0; v < n; ++v) {
      if (chosen.contains(v)) continue;
      auto trial = chosen;
      trial.insert(v);
      auto sc = score_intervention(state, trial);
      if (sc > pick_score) {
        pick_score = sc;
        pick = v;
      }
    }
    if (!pick) break;
    chosen.insert(*pick);
    best = pick_score;
  }
  return chosen;
}

}  // namespace intervene
