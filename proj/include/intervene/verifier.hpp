#pragma once

// Exhaustive checks over D(n): does a schedule tell every DAG apart, and how
// short can an identifying schedule be?

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "intervene/enumerate.hpp"
#include "intervene/knowledge.hpp"
#include "intervene/oracle.hpp"
#include "intervene/planner.hpp"

namespace intervene {

/// Interned oracle responses: entry [experiment mask][dag id] is a small
/// integer, equal for two DAGs iff their full responses are identical.
class ResponseTable {
 public:
  explicit ResponseTable(std::shared_ptr<const DagSpace> space) : space_(std::move(space)) {
    const auto n = space_->variables();
    const std::size_t experiments = std::size_t{1} << n;
    ids_.assign(experiments, std::vector<std::uint32_t>(space_->size()));
    distinct_.assign(experiments, 0);
    for (std::size_t mask = 0; mask < experiments; ++mask) {
      std::map<std::vector<std::uint64_t>, std::uint32_t> intern;
      const auto intervention = VariableSet::from_bits(mask);
      for (std::size_t id = 0; id < space_->size(); ++id) {
        auto key = independence_key(manipulated_graph((*space_)[static_cast<DagId>(id)], intervention));
        auto [it, fresh] = intern.try_emplace(std::move(key), static_cast<std::uint32_t>(intern.size()));
        ids_[mask][id] = it->second;
      }
      distinct_[mask] = intern.size();
    }
  }

  const DagSpace& space() const { return *space_; }
  const std::shared_ptr<const DagSpace>& space_ptr() const { return space_; }
  std::uint32_t response(InterventionSet experiment, DagId id) const { return ids_[experiment.bits()][id]; }
  /// Number of distinct responses the experiment can produce over D(n).
  std::size_t distinct(InterventionSet experiment) const { return distinct_[experiment.bits()]; }

 private:
  std::shared_ptr<const DagSpace> space_;
  std::vector<std::vector<std::uint32_t>> ids_;
  std::vector<std::size_t> distinct_;
};

/// Per DAG, the sequence of interned responses a schedule produces.
class SignatureTable {
 public:
  SignatureTable(const ResponseTable& responses, const Schedule& s) {
    if (s.variables() != responses.space().variables()) throw ArgumentError("schedule and DAG space differ in n");
    rows_.resize(responses.space().size());
    for (std::size_t id = 0; id < rows_.size(); ++id) {
      rows_[id].reserve(s.size());
      for (const auto& e : s.experiments()) rows_[id].push_back(responses.response(e.intervention, static_cast<DagId>(id)));
    }
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::uint32_t>& operator[](DagId id) const { return rows_[id]; }
  bool operator==(const SignatureTable&) const = default;

  /// Groups of DAG ids sharing a signature, each group sorted, groups ordered by first id.
  std::vector<std::vector<DagId>> collisions() const {
    std::vector<DagId> order(rows_.size());
    std::iota(order.begin(), order.end(), DagId{0});
    std::stable_sort(order.begin(), order.end(), [&](DagId a, DagId b) { return rows_[a] < rows_[b]; });
    std::vector<std::vector<DagId>> groups;
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i + 1;
      while (j < order.size() && rows_[order[j]] == rows_[order[i]]) ++j;
      if (j - i > 1) {
        std::vector<DagId> g(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(j));
        std::sort(g.begin(), g.end());
        groups.push_back(std::move(g));
      }
      i = j;
    }
    std::sort(groups.begin(), groups.end());
    return groups;
  }

 private:
  std::vector<std::vector<std::uint32_t>> rows_;
};

/// Two distinct DAGs that produce identical responses under a schedule.
struct Witness {
  Dag first;
  Dag second;
};

struct IdentificationResult {
  bool identifies = false;
  std::optional<Witness> witness;

  explicit operator bool() const { return identifies; }
};

/// Injectivity of the signature map. The witness prefers a confused pair
/// containing a complete DAG when one exists.
inline IdentificationResult identifies_all(const ResponseTable& responses, const Schedule& s) {
  const auto groups = SignatureTable(responses, s).collisions();
  if (groups.empty()) return {true, std::nullopt};
  const auto& space = responses.space();
  for (const auto& g : groups) {
    for (auto id : g) {
      if (space[id].complete()) {
        const DagId other = g.front() == id ? g[1] : g.front();
        return {false, Witness{space[id], space[other]}};
      }
    }
  }
  return {false, Witness{space[groups.front()[0]], space[groups.front()[1]]}};
}

inline IdentificationResult identifies_all(const Schedule& s, std::size_t cap = kDefaultEnumerationCap) {
  check_enumeration_cap(s.variables(), cap);
  ResponseTable responses(make_space(s.variables(), cap));
  return identifies_all(responses, s);
}

namespace detail {

inline std::uint64_t relabel(std::uint64_t mask, const std::vector<VariableId>& perm) {
  std::uint64_t out = 0;
  for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
    out |= std::uint64_t{1} << perm[static_cast<std::size_t>(std::countr_zero(rest))];
  }
  return out;
}

// True iff the sorted multiset `masks` is the lexicographically smallest
// among its images under every relabeling of the variables.
inline bool canonical_under_relabeling(const std::vector<std::uint64_t>& masks,
                                       const std::vector<std::vector<VariableId>>& perms) {
  std::vector<std::uint64_t> image(masks.size());
  for (const auto& perm : perms) {
    for (std::size_t i = 0; i < masks.size(); ++i) image[i] = relabel(masks[i], perm);
    std::sort(image.begin(), image.end());
    if (image < masks) return false;
  }
  return true;
}

inline std::vector<std::vector<VariableId>> all_permutations(std::size_t n) {
  std::vector<VariableId> p(n);
  std::iota(p.begin(), p.end(), VariableId{0});
  std::vector<std::vector<VariableId>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Calls fn on each non-decreasing sequence of `length` picks from `choices`.
template <typename Fn>
void for_each_multiset(const std::vector<std::uint64_t>& choices, std::size_t length, Fn&& fn) {
  if (choices.empty() && length > 0) return;
  std::vector<std::size_t> idx(length, 0);
  std::vector<std::uint64_t> masks(length);
  while (true) {
    for (std::size_t i = 0; i < length; ++i) masks[i] = choices[idx[i]];
    fn(masks);
    std::size_t pos = length;
    while (pos > 0 && idx[pos - 1] + 1 == choices.size()) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < length; ++i) idx[i] = idx[pos - 1];
  }
}

inline Schedule schedule_from_masks(std::size_t n, const std::vector<std::uint64_t>& masks) {
  Schedule s(n);
  for (auto m : masks) s.push_back({VariableSet::from_bits(m)});
  return s;
}

}  // namespace detail

/// A schedule that fails to identify D(n), with the DAG pair it confuses.
struct Defeat {
  Schedule schedule;
  Witness witness;
};

struct LengthSearch {
  std::size_t length = 0;
  std::size_t candidates = 0;  // canonical schedules examined at this length
  std::optional<Schedule> identifying;
  std::vector<Defeat> defeats;  // every examined candidate, when none identifies
};

struct MinLengthResult {
  std::optional<std::size_t> length;
  std::optional<Schedule> example;
  std::vector<LengthSearch> searched;  // lengths 1..min (or 1..max_len), in order

  /// The length just below the minimum, where every candidate failed.
  const LengthSearch* below_minimum() const {
    if (!length || *length <= 1) return nullptr;
    return &searched[*length - 2];
  }
};

/// Examines every canonical non-adaptive schedule of one length. Schedules are
/// canonical when their experiments are sorted and no relabeling of variables
/// gives a lexicographically smaller sorted form. Stops at the first
/// identifying schedule unless `exhaustive`.
inline LengthSearch search_length(const ResponseTable& responses, std::size_t length,
                                  std::optional<std::size_t> kmax = std::nullopt, bool exhaustive = false) {
  const auto n = responses.space().variables();
  std::vector<std::uint64_t> choices;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (!kmax || static_cast<std::size_t>(std::popcount(m)) <= *kmax) choices.push_back(m);
  const auto perms = detail::all_permutations(n);

  LengthSearch out;
  out.length = length;
  bool done = false;
  detail::for_each_multiset(choices, length, [&](const std::vector<std::uint64_t>& masks) {
    if (done || !detail::canonical_under_relabeling(masks, perms)) return;
    ++out.candidates;
    auto s = detail::schedule_from_masks(n, masks);
    auto result = identifies_all(responses, s);
    if (result) {
      if (!out.identifying) out.identifying = s;
      if (!exhaustive) done = true;
    } else if (!out.identifying) {
      out.defeats.push_back({std::move(s), std::move(*result.witness)});
    }
  });
  if (out.identifying) out.defeats.clear();
  return out;
}

/// Smallest L <= max_len for which some non-adaptive schedule (each set of
/// size <= kmax, if given) identifies every DAG on n vertices.
inline MinLengthResult min_schedule_length(const ResponseTable& responses, std::size_t max_len,
                                           std::optional<std::size_t> kmax = std::nullopt) {
  MinLengthResult out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    auto step = search_length(responses, len, kmax);
    const bool found = step.identifying.has_value();
    if (found) {
      out.length = len;
      out.example = step.identifying;
    }
    out.searched.push_back(std::move(step));
    if (found) break;
  }
  return out;
}

inline MinLengthResult min_schedule_length(std::size_t n, std::size_t max_len,
                                           std::optional<std::size_t> kmax = std::nullopt,
                                           std::size_t cap = kDefaultEnumerationCap) {
  check_enumeration_cap(n, cap);
  ResponseTable responses(make_space(n, cap));
  return min_schedule_length(responses, max_len, kmax);
}

/// Largest n accepted by the adaptive game-tree search unless overridden.
inline constexpr std::size_t kDefaultAdaptiveCap = 3;

namespace detail {

inline bool adaptive_solvable(const ResponseTable& responses, const std::vector<DagId>& candidates,
                              std::size_t depth, const std::vector<std::uint64_t>& choices) {
  if (candidates.size() <= 1) return true;
  if (depth == 0) return false;
  for (auto mask : choices) {
    const auto e = VariableSet::from_bits(mask);
    std::map<std::uint32_t, std::vector<DagId>> parts;
    for (auto id : candidates) parts[responses.response(e, id)].push_back(id);
    if (parts.size() == 1) continue;  // this experiment learns nothing here
    bool all = true;
    for (const auto& [resp, part] : parts) {
      if (!adaptive_solvable(responses, part, depth - 1, choices)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace detail

/// Worst-case depth of the best adaptive strategy (each experiment chosen
/// after seeing earlier responses), or none if it exceeds max_len.
inline std::optional<std::size_t> min_adaptive_length(const ResponseTable& responses, std::size_t max_len,
                                                      std::optional<std::size_t> kmax = std::nullopt,
                                                      std::size_t adaptive_cap = kDefaultAdaptiveCap) {
  const auto n = responses.space().variables();
  if (n > adaptive_cap) {
    throw CapExceeded("adaptive search is limited to n <= " + std::to_string(adaptive_cap), adaptive_cap);
  }
  std::vector<std::uint64_t> choices;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (!kmax || static_cast<std::size_t>(std::popcount(m)) <= *kmax) choices.push_back(m);
  std::vector<DagId> all(responses.space().size());
  std::iota(all.begin(), all.end(), DagId{0});
  for (std::size_t depth = 0; depth <= max_len; ++depth)
    if (detail::adaptive_solvable(responses, all, depth, choices)) return depth;
  return std::nullopt;
}

struct CrossCheckResult {
  bool ok = true;
  std::string failure;
  std::vector<std::size_t> consistent_sizes;  // after each experiment
  std::size_t resolved_pairs = 0;
  bool coverage_sufficient = false;

  explicit operator bool() const { return ok; }
};

/// Runs both knowledge engines over the schedule against the truth g.
inline CrossCheckResult cross_check_engines(const Dag& g, const Schedule& s, std::shared_ptr<const DagSpace> space) {
  if (space->variables() != g.size() || s.variables() != g.size()) throw ArgumentError("graph, schedule and space differ in n");
  const DagId truth = space->id_of(g);
  CrossCheckResult out;
  KnowledgeState pairwise(g.size());
  ConsistentSet exact(space);
  const auto fail = [&](std::string why) {
    out.ok = false;
    out.failure = std::move(why);
    return out;
  };
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto& e = s[t];
    try {
      pairwise = update_pairwise(pairwise, e, pair_outcomes(g, e));
      exact = update_consistent_set(exact, e, run_experiment(g, e));
    } catch (const ContradictionError& err) {
      throw ContradictionError("experiment " + std::to_string(t) + ": " + err.what(), err.pair());
    }
    out.consistent_sizes.push_back(exact.size());
    if (!exact.contains(truth)) return fail("true DAG dropped from the consistent set at experiment " + std::to_string(t));
    for (const auto& pr : all_pairs(g.size())) {
      const auto& st = pairwise.at(pr.x, pr.y);
      if (!st.allows(relation_in(g, pr.x, pr.y))) {
        return fail("pair (" + std::to_string(pr.x) + ", " + std::to_string(pr.y) + ") lost its true relation");
      }
    }
  }
  out.resolved_pairs = pairwise.resolved_count();
  out.coverage_sufficient = coverage_report(s).overall_sufficient();
  if (out.coverage_sufficient) {
    if (!pairwise.resolved()) return fail("coverage-sufficient schedule left pairs unresolved");
    if (!(extract_dag(pairwise) == g)) return fail("pairwise engine extracted the wrong DAG");
    if (!exact.singleton()) return fail("consistent set is not a singleton under a coverage-sufficient schedule");
  }
  return out;
}

/// What theory predicts for identifying every DAG on n variables, optionally
/// under an intervention-size cap, and the construction that achieves it.
struct BoundTarget {
  Schedule schedule;
  std::string strategy;
  std::string formula;
  std::size_t expected = 0;
  bool tight = false;  // expected is also the worst-case minimum, not only an upper bound
};

inline BoundTarget bound_target(std::size_t n, std::optional<std::size_t> kmax = std::nullopt) {
  if (n < 2) throw ArgumentError("bounds are stated for n >= 2");
  if (kmax && *kmax == 0) throw ArgumentError("kmax must be at least 1");
  auto binary = binary_codeword_schedule(n);
  if (!kmax || binary.largest_intervention() <= *kmax) {
    return {std::move(binary), "binary", unrestricted_bound_formula(n), unrestricted_bound(n), true};
  }
  if (2 * *kmax < n) {
    const std::size_t k = *kmax;
    const std::size_t p = (n + k - 1) / k;
    // The worst-case argument needs kmax | n, an even block count and an
    // integral log; kmax = 1 is the N-1 single-intervention case.
    const bool tight = (n % k == 0 && p % 2 == 0 && is_power_of_two(k)) || k == 1;
    return {kmax_schedule(n, k), "kmax", kmax_bound_formula(n, k), kmax_bound(n, k), tight};
  }
  return {single_intervention_schedule(n), "single", single_bound_formula(n), n - 1, false};
}

}  // namespace intervene
