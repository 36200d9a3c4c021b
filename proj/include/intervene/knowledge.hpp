#pragma once

// Two ways of accumulating what a sequence of experiments has revealed:
//   * KnowledgeState: one possibility lattice per pair; scales to any n.
//   * ConsistentSet: the exact set of DAGs agreeing with every response;
//     bounded by the enumeration cap.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "intervene/dag.hpp"
#include "intervene/enumerate.hpp"
#include "intervene/oracle.hpp"

namespace intervene {

enum class Relation : std::uint8_t { XToY = 1, YToX = 2, NoEdge = 4 };

/// Nonempty subset of {x -> y, y -> x, no edge} for a pair x < y.
class PairState {
 public:
  static constexpr std::uint8_t kAll = 7;

  constexpr PairState() = default;
  static constexpr PairState from_bits(std::uint8_t bits) {
    PairState s;
    s.bits_ = bits;
    return s;
  }
  static constexpr PairState only(Relation r) { return from_bits(static_cast<std::uint8_t>(r)); }

  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool allows(Relation r) const { return (bits_ & static_cast<std::uint8_t>(r)) != 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool resolved() const { return size() == 1; }
  constexpr bool known_adjacent() const { return bits_ != 0 && !allows(Relation::NoEdge); }
  constexpr bool known_non_adjacent() const { return bits_ == static_cast<std::uint8_t>(Relation::NoEdge); }

  constexpr PairState intersect(PairState o) const { return from_bits(bits_ & o.bits_); }
  constexpr bool operator==(const PairState&) const = default;

 private:
  std::uint8_t bits_ = kAll;
};

/// Relations compatible with a verdict; unconstrained for Verdict::None.
constexpr PairState implication(Verdict v) {
  using R = Relation;
  constexpr auto bits = [](R a) { return static_cast<std::uint8_t>(a); };
  switch (v) {
    case Verdict::EdgeXToY: return PairState::only(R::XToY);
    case Verdict::EdgeYToX: return PairState::only(R::YToX);
    case Verdict::NoEdgeFromX: return PairState::from_bits(bits(R::YToX) | bits(R::NoEdge));
    case Verdict::NoEdgeFromY: return PairState::from_bits(bits(R::XToY) | bits(R::NoEdge));
    case Verdict::Adjacent: return PairState::from_bits(bits(R::XToY) | bits(R::YToX));
    case Verdict::NotAdjacent: return PairState::only(R::NoEdge);
    case Verdict::None: return PairState{};
  }
  return PairState{};
}

/// The true relation of pair (x, y) in g.
inline Relation relation_in(const Dag& g, VariableId x, VariableId y) {
  if (g.has_edge(x, y)) return Relation::XToY;
  if (g.has_edge(y, x)) return Relation::YToX;
  return Relation::NoEdge;
}

/// Inputs that no single DAG could have produced.
class ContradictionError : public std::runtime_error {
 public:
  ContradictionError(const std::string& what, std::optional<VariablePair> pair = std::nullopt)
      : std::runtime_error(what), pair_(pair) {}
  const std::optional<VariablePair>& pair() const { return pair_; }

 private:
  std::optional<VariablePair> pair_;
};

class NotResolvedError : public std::runtime_error {
 public:
  NotResolvedError(const std::string& what, std::vector<VariablePair> unresolved)
      : std::runtime_error(what), unresolved_(std::move(unresolved)) {}
  const std::vector<VariablePair>& unresolved() const { return unresolved_; }

 private:
  std::vector<VariablePair> unresolved_;
};

class KnowledgeState {
 public:
  explicit KnowledgeState(std::size_t n) : n_(n), pairs_(pair_count(n)) {
    if (n == 0 || n > kMaxVariables) throw ArgumentError("knowledge state needs 1..64 variables");
  }

  std::size_t variables() const { return n_; }
  const PairState& at(VariableId x, VariableId y) const { return pairs_[pair_index(n_, x, y)]; }
  const std::vector<PairState>& pair_states() const { return pairs_; }
  const std::vector<Experiment>& history() const { return history_; }

  bool resolved() const {
    for (const auto& p : pairs_)
      if (!p.resolved()) return false;
    return true;
  }

  std::vector<VariablePair> unresolved_pairs() const {
    std::vector<VariablePair> out;
    for (const auto& pr : all_pairs(n_))
      if (!at(pr.x, pr.y).resolved()) out.push_back(pr);
    return out;
  }

  std::size_t resolved_count() const {
    std::size_t c = 0;
    for (const auto& p : pairs_) c += p.resolved() ? 1 : 0;
    return c;
  }

  /// Returns a copy with pair (x, y) narrowed; throws on an empty intersection.
  KnowledgeState narrowed(VariableId x, VariableId y, PairState allowed) const {
    KnowledgeState copy = *this;
    copy.narrow_in_place(x, y, allowed);
    return copy;
  }

 private:
  friend KnowledgeState update_pairwise(const KnowledgeState&, const Experiment&, const std::vector<PairOutcome>&);
  friend KnowledgeState apply_collider_rule(const KnowledgeState&, const OracleResponse&);

  void narrow_in_place(VariableId x, VariableId y, PairState allowed) {
    auto& slot = pairs_[pair_index(n_, x, y)];
    auto next = slot.intersect(allowed);
    if (next.bits() == 0) {
      throw ContradictionError("contradictory evidence for pair (" + std::to_string(x) + ", " + std::to_string(y) + ")",
                               VariablePair{x, y});
    }
    slot = next;
  }

  std::size_t n_;
  std::vector<PairState> pairs_;
  std::vector<Experiment> history_;
};

/// Intersects each pair's possibilities with its verdict's implication set
/// and records the experiment.
inline KnowledgeState update_pairwise(const KnowledgeState& state, const Experiment& e,
                                      const std::vector<PairOutcome>& outcomes) {
  KnowledgeState next = state;
  for (const auto& o : outcomes) {
    if (o.x >= o.y || o.y >= state.variables()) throw ArgumentError("pair outcome outside the state's variables");
    if (classify_pair(e.intervention, o.x, o.y) != o.kind) {
      throw ArgumentError("pair outcome kind does not match the experiment's intervention set");
    }
    next.narrow_in_place(o.x, o.y, implication(o.verdict));
  }
  next.history_.push_back(e);
  return next;
}

/// Orients a - b <- c when a, c are known non-adjacent, both known adjacent to
/// b, and some z without b separates a from c while z ∪ {b} does not. Only
/// triples of non-intervened variables are considered.
inline KnowledgeState apply_collider_rule(const KnowledgeState& state, const OracleResponse& response) {
  const auto n = state.variables();
  if (response.statements.size() != response_statement_count(n)) {
    throw ArgumentError("collider rule needs a complete oracle response");
  }
  const auto intervened = response.experiment.intervention;
  const auto everything = VariableSet::all(n);
  const auto lookup = [&](VariableId x, VariableId y, VariableSet z) {
    // Statement position: pairs in order, then z's rank among subsets of the complement.
    const auto rest = everything.without(VariableSet{x, y});
    std::size_t rank = 0;
    std::size_t place = 0;
    for (auto v : rest) {
      if (z.contains(v)) rank |= std::size_t{1} << place;
      ++place;
    }
    const std::size_t block = std::size_t{1} << (n - 2);
    return response.statements[pair_index(n, x, y) * block + rank].independent;
  };
  const auto orient_into = [](VariableId from, VariableId into) {
    return from < into ? PairState::only(Relation::XToY) : PairState::only(Relation::YToX);
  };

  KnowledgeState next = state;
  for (VariableId a = 0; a < n; ++a) {
    if (intervened.contains(a)) continue;
    for (VariableId c = a + 1; c < n; ++c) {
      if (intervened.contains(c) || !state.at(a, c).known_non_adjacent()) continue;
      for (VariableId b = 0; b < n; ++b) {
        if (b == a || b == c || intervened.contains(b)) continue;
        const auto& ab = state.at(std::min(a, b), std::max(a, b));
        const auto& cb = state.at(std::min(c, b), std::max(c, b));
        if (!ab.known_adjacent() || !cb.known_adjacent()) continue;
        bool fires = false;
        detail::for_each_subset(everything.without(VariableSet{a, b, c}).bits(), [&](VariableSet z) {
          if (!fires && lookup(a, c, z) && !lookup(a, c, z | VariableSet{b})) fires = true;
        });
        if (!fires) continue;
        next.narrow_in_place(std::min(a, b), std::max(a, b), orient_into(a, b));
        next.narrow_in_place(std::min(c, b), std::max(c, b), orient_into(c, b));
      }
    }
  }
  return next;
}

/// The unique DAG named by a fully resolved state.
inline Dag extract_dag(const KnowledgeState& state) {
  auto unresolved = state.unresolved_pairs();
  if (!unresolved.empty()) {
    throw NotResolvedError(std::to_string(unresolved.size()) + " pair(s) remain unresolved", std::move(unresolved));
  }
  std::vector<Edge> edges;
  for (const auto& pr : all_pairs(state.variables())) {
    const auto& s = state.at(pr.x, pr.y);
    if (s.allows(Relation::XToY)) edges.push_back({pr.x, pr.y});
    else if (s.allows(Relation::YToX)) edges.push_back({pr.y, pr.x});
  }
  try {
    return Dag(state.variables(), std::move(edges));
  } catch (const DagError& err) {
    throw ContradictionError(std::string("resolved pairs do not form a DAG: ") + err.what());
  }
}

/// Members of D(n) that agree with every response seen so far.
class ConsistentSet {
 public:
  explicit ConsistentSet(std::shared_ptr<const DagSpace> space) : space_(std::move(space)) {
    members_.resize(space_->size());
    for (std::size_t i = 0; i < members_.size(); ++i) members_[i] = static_cast<DagId>(i);
  }

  ConsistentSet(std::shared_ptr<const DagSpace> space, std::vector<DagId> members)
      : space_(std::move(space)), members_(std::move(members)) {}

  std::size_t variables() const { return space_->variables(); }
  std::size_t size() const { return members_.size(); }
  const std::vector<DagId>& members() const { return members_; }
  const DagSpace& space() const { return *space_; }
  const std::shared_ptr<const DagSpace>& space_ptr() const { return space_; }

  bool contains(DagId id) const { return std::binary_search(members_.begin(), members_.end(), id); }
  bool singleton() const { return members_.size() == 1; }

 private:
  std::shared_ptr<const DagSpace> space_;
  std::vector<DagId> members_;
};

/// Keeps exactly the candidates h with run_experiment(h, e) == response.
inline ConsistentSet update_consistent_set(const ConsistentSet& set, const Experiment& e,
                                           const OracleResponse& response) {
  if (response.experiment != e) throw ArgumentError("response belongs to a different experiment");
  std::vector<DagId> kept;
  for (auto id : set.members()) {
    const auto& h = set.space()[id];
    if (run_experiment(h, e) == response) kept.push_back(id);
  }
  if (kept.empty()) {
    throw ContradictionError("no DAG on " + std::to_string(set.variables()) +
                             " variables is consistent with the responses seen");
  }
  return ConsistentSet(set.space_ptr(), std::move(kept));
}

}  // namespace intervene
