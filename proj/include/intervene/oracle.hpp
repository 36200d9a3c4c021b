#pragma once

// Simulated independence oracle: the complete set of conditional
// independence facts of a manipulated graph, and the per-pair test
// classification that an experiment induces.

#include <cstdint>
#include <string>
#include <vector>

#include "intervene/dag.hpp"
#include "intervene/enumerate.hpp"

namespace intervene {

/// Largest n for which run_experiment materializes a full response.
inline constexpr std::size_t kDefaultResponseCap = 16;

struct Experiment {
  InterventionSet intervention;

  bool null() const { return intervention.empty(); }
  bool operator==(const Experiment&) const = default;
};

/// x ⊥ y | z (independent) or its negation. Always x < y.
struct CiStatement {
  VariableId x = 0;
  VariableId y = 0;
  VariableSet z;
  bool independent = false;

  bool operator==(const CiStatement&) const = default;
};

/// One statement per (pair, conditioning set), pairs lexicographic and
/// conditioning sets in increasing mask order.
struct OracleResponse {
  Experiment experiment;
  std::vector<CiStatement> statements;

  bool operator==(const OracleResponse&) const = default;
};

enum class TestKind { DirectionalFromX, DirectionalFromY, Adjacency, ZeroInformation };

enum class Verdict { EdgeXToY, EdgeYToX, NoEdgeFromX, NoEdgeFromY, Adjacent, NotAdjacent, None };

struct PairOutcome {
  VariableId x = 0;
  VariableId y = 0;
  TestKind kind = TestKind::ZeroInformation;
  Verdict verdict = Verdict::None;

  bool operator==(const PairOutcome&) const = default;
};

struct TestKindCounts {
  std::size_t directional = 0;
  std::size_t adjacency = 0;
  std::size_t zero_information = 0;

  bool operator==(const TestKindCounts&) const = default;
};

inline const char* to_string(TestKind k) {
  switch (k) {
    case TestKind::DirectionalFromX: return "directional-from-x";
    case TestKind::DirectionalFromY: return "directional-from-y";
    case TestKind::Adjacency: return "adjacency";
    case TestKind::ZeroInformation: return "zero-information";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::EdgeXToY: return "edge-x-to-y";
    case Verdict::EdgeYToX: return "edge-y-to-x";
    case Verdict::NoEdgeFromX: return "no-edge-from-x";
    case Verdict::NoEdgeFromY: return "no-edge-from-y";
    case Verdict::Adjacent: return "adjacent";
    case Verdict::NotAdjacent: return "not-adjacent";
    case Verdict::None: return "none";
  }
  return "?";
}

/// Which kind of test an experiment is for the pair (x, y), by membership alone.
constexpr TestKind classify_pair(InterventionSet intervention, VariableId x, VariableId y) {
  const bool in_x = intervention.contains(x);
  const bool in_y = intervention.contains(y);
  if (in_x && in_y) return TestKind::ZeroInformation;
  if (in_x) return TestKind::DirectionalFromX;
  if (in_y) return TestKind::DirectionalFromY;
  return TestKind::Adjacency;
}

/// (K(N-K), C(N-K, 2), C(K, 2)) for a K-intervention on N variables.
constexpr TestKindCounts count_test_kinds(std::size_t n, std::size_t k) {
  if (k > n) throw ArgumentError("intervention size exceeds the number of variables");
  return {k * (n - k), pair_count(n - k), pair_count(k)};
}

constexpr std::size_t response_statement_count(std::size_t n) {
  return pair_count(n) * (n < 2 ? 0 : std::size_t{1} << (n - 2));
}

namespace detail {

// Visits every subset of `mask` in increasing numeric order.
template <typename Fn>
void for_each_subset(std::uint64_t mask, Fn&& fn) {
  std::uint64_t sub = 0;
  while (true) {
    fn(VariableSet::from_bits(sub));
    if (sub == mask) break;
    sub = (sub - mask) & mask;
  }
}

}  // namespace detail

inline OracleResponse run_experiment(const Dag& g, const Experiment& e,
                                     std::size_t response_cap = kDefaultResponseCap) {
  const auto n = g.size();
  if (n > response_cap) {
    throw CapExceeded("full oracle responses are capped at n = " + std::to_string(response_cap) +
                          "; use pair_outcomes for larger graphs",
                      response_cap);
  }
  const Dag manipulated = manipulated_graph(g, e.intervention);
  OracleResponse out{e, {}};
  out.statements.reserve(response_statement_count(n));
  const auto everything = VariableSet::all(n);
  for (VariableId x = 0; x < n; ++x) {
    for (VariableId y = x + 1; y < n; ++y) {
      auto rest = everything.without(VariableSet{x, y});
      detail::for_each_subset(rest.bits(), [&](VariableSet z) {
        out.statements.push_back({x, y, z, d_separated(manipulated, x, y, z)});
      });
    }
  }
  return out;
}

/// The independence flags of run_experiment packed in statement order.
/// Equal keys ⟺ equal responses for the same experiment.
inline std::vector<std::uint64_t> independence_key(const Dag& manipulated) {
  const auto n = manipulated.size();
  std::vector<std::uint64_t> key((response_statement_count(n) + 63) / 64, 0);
  std::size_t bit = 0;
  const auto everything = VariableSet::all(n);
  for (VariableId x = 0; x < n; ++x) {
    for (VariableId y = x + 1; y < n; ++y) {
      auto rest = everything.without(VariableSet{x, y});
      detail::for_each_subset(rest.bits(), [&](VariableSet z) {
        if (d_separated(manipulated, x, y, z)) key[bit / 64] |= std::uint64_t{1} << (bit % 64);
        ++bit;
      });
    }
  }
  return key;
}

inline std::vector<std::uint64_t> independence_key(const OracleResponse& response) {
  std::vector<std::uint64_t> key((response.statements.size() + 63) / 64, 0);
  for (std::size_t bit = 0; bit < response.statements.size(); ++bit)
    if (response.statements[bit].independent) key[bit / 64] |= std::uint64_t{1} << (bit % 64);
  return key;
}

namespace detail {

inline Verdict verdict_for(TestKind kind, bool adjacent_after_surgery) {
  switch (kind) {
    case TestKind::DirectionalFromX: return adjacent_after_surgery ? Verdict::EdgeXToY : Verdict::NoEdgeFromX;
    case TestKind::DirectionalFromY: return adjacent_after_surgery ? Verdict::EdgeYToX : Verdict::NoEdgeFromY;
    case TestKind::Adjacency: return adjacent_after_surgery ? Verdict::Adjacent : Verdict::NotAdjacent;
    case TestKind::ZeroInformation: return Verdict::None;
  }
  return Verdict::None;
}

}  // namespace detail

/// Per-pair test kind and verdict. Linear in the number of pairs, no size cap.
inline std::vector<PairOutcome> pair_outcomes(const Dag& g, const Experiment& e) {
  const Dag manipulated = manipulated_graph(g, e.intervention);
  const auto n = g.size();
  std::vector<PairOutcome> out;
  out.reserve(pair_count(n));
  for (VariableId x = 0; x < n; ++x) {
    for (VariableId y = x + 1; y < n; ++y) {
      const auto kind = classify_pair(e.intervention, x, y);
      out.push_back({x, y, kind, detail::verdict_for(kind, manipulated.adjacent(x, y))});
    }
  }
  return out;
}

/// Recomputes pair outcomes from the statements alone: a pair is adjacent in
/// the manipulated graph iff no conditioning set makes it independent.
inline std::vector<PairOutcome> outcomes_from_response(std::size_t n, const OracleResponse& response) {
  if (response.statements.size() != response_statement_count(n)) {
    throw ArgumentError("response does not cover every (pair, conditioning set) combination");
  }
  std::vector<bool> separable(pair_count(n), false);
  for (const auto& s : response.statements)
    if (s.independent) separable[pair_index(n, s.x, s.y)] = true;
  std::vector<PairOutcome> out;
  out.reserve(pair_count(n));
  for (VariableId x = 0; x < n; ++x) {
    for (VariableId y = x + 1; y < n; ++y) {
      const auto kind = classify_pair(response.experiment.intervention, x, y);
      out.push_back({x, y, kind, detail::verdict_for(kind, !separable[pair_index(n, x, y)])});
    }
  }
  return out;
}

}  // namespace intervene
