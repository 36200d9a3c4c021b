#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "intervene/dag.hpp"

namespace intervene {

/// Default largest n for which the full DAG space is materialized (29,281 graphs at n = 5).
inline constexpr std::size_t kDefaultEnumerationCap = 5;

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::size_t cap) : std::runtime_error(what), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

inline void check_enumeration_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw CapExceeded("refusing to enumerate DAGs on " + std::to_string(n) + " variables: enumeration cap is " +
                          std::to_string(cap),
                      cap);
  }
}

namespace detail {

// Base-3 code over the lexicographic pair list; digit 0 = no edge, 1 = x -> y, 2 = y -> x.
inline std::uint64_t pair_code(const Dag& g) {
  std::uint64_t code = 0;
  std::uint64_t place = 1;
  const auto n = g.size();
  for (VariableId x = 0; x < n; ++x) {
    for (VariableId y = x + 1; y < n; ++y) {
      if (g.has_edge(x, y)) code += place;
      else if (g.has_edge(y, x)) code += 2 * place;
      place *= 3;
    }
  }
  return code;
}

inline bool acyclic(std::size_t n, const std::vector<std::uint64_t>& children) {
  std::uint64_t remaining = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  // Repeatedly strip a vertex with no children among the remaining ones.
  while (remaining != 0) {
    bool stripped = false;
    for (std::uint64_t rest = remaining; rest != 0; rest &= rest - 1) {
      auto v = static_cast<std::size_t>(std::countr_zero(rest));
      if ((children[v] & remaining) == 0) {
        remaining &= ~(std::uint64_t{1} << v);
        stripped = true;
      }
    }
    if (!stripped) return false;
  }
  return true;
}

}  // namespace detail

/// Every labeled DAG on n vertices exactly once, ordered by increasing base-3
/// pair code (first pair (0,1) is the least significant digit).
inline std::vector<Dag> enumerate_dags(std::size_t n, std::size_t cap = kDefaultEnumerationCap) {
  if (n == 0) throw ArgumentError("enumeration needs n >= 1");
  check_enumeration_cap(n, cap);
  const auto pairs = all_pairs(n);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;

  std::vector<Dag> out;
  std::vector<std::uint64_t> children(n);
  std::vector<int> digits(pairs.size(), 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::fill(children.begin(), children.end(), 0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (digits[p] == 1) children[pairs[p].x] |= std::uint64_t{1} << pairs[p].y;
      else if (digits[p] == 2) children[pairs[p].y] |= std::uint64_t{1} << pairs[p].x;
    }
    if (detail::acyclic(n, children)) {
      std::vector<Edge> edges;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (digits[p] == 1) edges.push_back({pairs[p].x, pairs[p].y});
        else if (digits[p] == 2) edges.push_back({pairs[p].y, pairs[p].x});
      }
      out.emplace_back(n, std::move(edges));
    }
    for (std::size_t p = 0; p < digits.size(); ++p) {
      if (++digits[p] < 3) break;
      digits[p] = 0;
    }
  }
  return out;
}

/// Identifier of a DAG within enumerate_dags(n): its position in that sequence.
using DagId = std::uint32_t;

/// The materialized hypothesis space D(n) with id lookup.
class DagSpace {
 public:
  explicit DagSpace(std::size_t n, std::size_t cap = kDefaultEnumerationCap) : n_(n), dags_(enumerate_dags(n, cap)) {
    codes_.reserve(dags_.size());
    for (const auto& g : dags_) codes_.push_back(detail::pair_code(g));
  }

  std::size_t variables() const { return n_; }
  std::size_t size() const { return dags_.size(); }
  const Dag& operator[](DagId id) const { return dags_[id]; }
  const std::vector<Dag>& dags() const { return dags_; }

  std::optional<DagId> find(const Dag& g) const {
    if (g.size() != n_) return std::nullopt;
    auto code = detail::pair_code(g);
    auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code) return std::nullopt;
    return static_cast<DagId>(it - codes_.begin());
  }

  DagId id_of(const Dag& g) const {
    auto id = find(g);
    if (!id) throw ArgumentError("graph is not a member of this DAG space");
    return *id;
  }

 private:
  std::size_t n_;
  std::vector<Dag> dags_;
  std::vector<std::uint64_t> codes_;
};

inline std::shared_ptr<const DagSpace> make_space(std::size_t n, std::size_t cap = kDefaultEnumerationCap) {
  return std::make_shared<const DagSpace>(n, cap);
}

}  // namespace intervene
