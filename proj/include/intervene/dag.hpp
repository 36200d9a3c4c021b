#pragma once

// Directed acyclic graphs over indexed variables, graph surgery for
// interventions, and d-separation.

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "intervene/variable_set.hpp"

namespace intervene {

struct Edge {
  VariableId parent = 0;
  VariableId child = 0;

  constexpr bool operator==(const Edge&) const = default;
  constexpr auto operator<=>(const Edge&) const = default;
};

class DagError : public std::invalid_argument {
 public:
  enum class Kind { EmptyGraph, TooManyVariables, EndpointOutOfRange, SelfLoop, DuplicateEdge, Cycle };

  DagError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// An argument combination that violates a query's preconditions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Dag {
 public:
  /// Validating constructor. Throws DagError on any invariant violation.
  Dag(std::size_t n, std::vector<Edge> edges) : n_(n), parents_(n), children_(n) {
    if (n == 0) throw DagError(DagError::Kind::EmptyGraph, "a graph needs at least one variable");
    if (n > kMaxVariables) {
      throw DagError(DagError::Kind::TooManyVariables,
                     "graphs are limited to " + std::to_string(kMaxVariables) + " variables, got " +
                         std::to_string(n));
    }
    for (const auto& e : edges) {
      if (e.parent >= n || e.child >= n) {
        throw DagError(DagError::Kind::EndpointOutOfRange,
                       "edge " + describe(e) + " has an endpoint outside [0, " + std::to_string(n) + ")");
      }
      if (e.parent == e.child) throw DagError(DagError::Kind::SelfLoop, "self-loop at " + std::to_string(e.parent));
      if (children_[e.parent].contains(e.child)) {
        throw DagError(DagError::Kind::DuplicateEdge, "duplicate edge " + describe(e));
      }
      children_[e.parent].insert(e.child);
      parents_[e.child].insert(e.parent);
    }
    std::sort(edges.begin(), edges.end());
    edges_ = std::move(edges);
    if (!topological_order()) {
      throw DagError(DagError::Kind::Cycle, "edge set contains a directed cycle");
    }
  }

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Sorted by (parent, child).
  const std::vector<Edge>& edges() const { return edges_; }

  VariableSet parents(VariableId v) const { return parents_[v]; }
  VariableSet children(VariableId v) const { return children_[v]; }

  bool has_edge(VariableId parent, VariableId child) const { return children_[parent].contains(child); }
  bool adjacent(VariableId a, VariableId b) const { return has_edge(a, b) || has_edge(b, a); }
  bool complete() const { return edges_.size() == pair_count(n_); }

  VariableSet ancestors_of(VariableSet targets) const {
    VariableSet seen = targets;
    std::vector<VariableId> stack = targets.members();
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto p : parents_[v]) {
        if (!seen.contains(p)) {
          seen.insert(p);
          stack.push_back(p);
        }
      }
    }
    return seen;
  }

  bool operator==(const Dag& o) const { return n_ == o.n_ && edges_ == o.edges_; }

  static std::string describe(const Edge& e) {
    return "(" + std::to_string(e.parent) + ", " + std::to_string(e.child) + ")";
  }

 private:
  // Kahn's algorithm; false when a cycle blocks it.
  bool topological_order() const {
    std::vector<std::size_t> indegree(n_);
    for (VariableId v = 0; v < n_; ++v) indegree[v] = parents_[v].size();
    std::vector<VariableId> ready;
    for (VariableId v = 0; v < n_; ++v)
      if (indegree[v] == 0) ready.push_back(v);
    std::size_t emitted = 0;
    while (!ready.empty()) {
      auto v = ready.back();
      ready.pop_back();
      ++emitted;
      for (auto c : children_[v])
        if (--indegree[c] == 0) ready.push_back(c);
    }
    return emitted == n_;
  }

  std::size_t n_;
  std::vector<VariableSet> parents_;
  std::vector<VariableSet> children_;
  std::vector<Edge> edges_;
};

inline Dag make_dag(std::size_t n, std::vector<Edge> edges) { return Dag(n, std::move(edges)); }

inline Dag empty_dag(std::size_t n) { return Dag(n, {}); }

/// Every forward pair of the identity order: i -> j for all i < j.
inline Dag complete_dag(std::size_t n) {
  std::vector<Edge> edges;
  for (VariableId i = 0; i < n; ++i)
    for (VariableId j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Dag(n, std::move(edges));
}

inline void check_intervention(const Dag& g, InterventionSet i) {
  if (!i.subset_of(VariableSet::all(g.size()))) {
    throw ArgumentError("intervention set contains a variable outside [0, " + std::to_string(g.size()) + ")");
  }
}

/// g with every edge into an intervened variable removed.
inline Dag manipulated_graph(const Dag& g, InterventionSet intervention) {
  check_intervention(g, intervention);
  std::vector<Edge> kept;
  kept.reserve(g.edge_count());
  for (const auto& e : g.edges())
    if (!intervention.contains(e.child)) kept.push_back(e);
  return Dag(g.size(), std::move(kept));
}

/// Reachability ("Bayes ball") test: x and y are d-separated given z iff no
/// active trail from x reaches y.
inline bool d_separated(const Dag& g, VariableId x, VariableId y, VariableSet z) {
  const auto n = g.size();
  if (x >= n || y >= n || !z.subset_of(VariableSet::all(n))) {
    throw ArgumentError("d-separation query refers to a variable outside the graph");
  }
  if (x == y) throw ArgumentError("d-separation query needs two distinct variables");
  if (z.contains(x) || z.contains(y)) throw ArgumentError("conditioning set contains a queried variable");

  const VariableSet opens_colliders = g.ancestors_of(z);
  // visited_up: reached from a child; visited_down: reached from a parent.
  VariableSet visited_up;
  VariableSet visited_down;
  std::vector<std::pair<VariableId, bool>> stack{{x, true}};
  while (!stack.empty()) {
    auto [v, up] = stack.back();
    stack.pop_back();
    if (up) {
      if (visited_up.contains(v)) continue;
      visited_up.insert(v);
    } else {
      if (visited_down.contains(v)) continue;
      visited_down.insert(v);
    }
    if (v == y) return false;
    const bool observed = z.contains(v);
    if (up && !observed) {
      for (auto p : g.parents(v)) stack.emplace_back(p, true);
      for (auto c : g.children(v)) stack.emplace_back(c, false);
    } else if (!up) {
      if (!observed)
        for (auto c : g.children(v)) stack.emplace_back(c, false);
      if (opens_colliders.contains(v))
        for (auto p : g.parents(v)) stack.emplace_back(p, true);
    }
  }
  return true;
}

/// Uniform random topological order from the seeded generator, then each
/// forward pair kept with probability edge_prob.
inline Dag random_dag(std::size_t n, double edge_prob, std::uint64_t seed) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw ArgumentError("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<VariableId> order(n);
  for (VariableId v = 0; v < n; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution keep(edge_prob);
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (keep(rng)) edges.push_back({order[a], order[b]});
  return Dag(n, std::move(edges));
}

}  // namespace intervene
