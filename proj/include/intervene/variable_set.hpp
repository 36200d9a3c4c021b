#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace intervene {

/// 0-based index of a variable. Valid values are [0, n) for the owning graph.
using VariableId = std::size_t;

/// Graphs, intervention sets and conditioning sets are bitmask-backed.
inline constexpr std::size_t kMaxVariables = 64;

/// A set of variables packed into a 64-bit mask.
class VariableSet {
 public:
  class iterator {
   public:
    using value_type = VariableId;
    using difference_type = std::ptrdiff_t;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}

    constexpr VariableId operator*() const {
      return static_cast<VariableId>(std::countr_zero(rest_));
    }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr VariableSet() = default;

  VariableSet(std::initializer_list<VariableId> members) {
    for (auto v : members) insert(v);
  }

  static constexpr VariableSet from_bits(std::uint64_t bits) {
    VariableSet s;
    s.bits_ = bits;
    return s;
  }

  /// {0, ..., n-1}
  static constexpr VariableSet all(std::size_t n) {
    return from_bits(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  static VariableSet from_members(const std::vector<VariableId>& members) {
    VariableSet s;
    for (auto v : members) s.insert(v);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr bool contains(VariableId v) const {
    return v < kMaxVariables && ((bits_ >> v) & 1U) != 0;
  }

  void insert(VariableId v) {
    if (v >= kMaxVariables) {
      throw std::out_of_range("variable index " + std::to_string(v) + " exceeds the " +
                              std::to_string(kMaxVariables) + "-variable limit");
    }
    bits_ |= std::uint64_t{1} << v;
  }

  constexpr void erase(VariableId v) {
    if (v < kMaxVariables) bits_ &= ~(std::uint64_t{1} << v);
  }

  /// Largest member + 1, or 0 when empty.
  constexpr std::size_t span() const {
    return bits_ == 0 ? 0 : 64 - static_cast<std::size_t>(std::countl_zero(bits_));
  }

  constexpr bool subset_of(VariableSet other) const { return (bits_ & ~other.bits_) == 0; }

  std::vector<VariableId> members() const { return {begin(), end()}; }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  constexpr VariableSet operator|(VariableSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr VariableSet operator&(VariableSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr VariableSet without(VariableSet o) const { return from_bits(bits_ & ~o.bits_); }

  constexpr bool operator==(const VariableSet&) const = default;
  constexpr auto operator<=>(const VariableSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

/// The subset I of simultaneously randomized variables. Empty means passive observation.
using InterventionSet = VariableSet;

/// Unordered variable pair, stored with x < y.
struct VariablePair {
  VariableId x = 0;
  VariableId y = 0;

  constexpr bool operator==(const VariablePair&) const = default;
  constexpr auto operator<=>(const VariablePair&) const = default;
};

constexpr std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Position of (x, y), x < y, in the lexicographic listing of all pairs on n variables.
constexpr std::size_t pair_index(std::size_t n, VariableId x, VariableId y) {
  return x * n - x * (x + 1) / 2 + (y - x - 1);
}

/// All unordered pairs on n variables, lexicographic.
inline std::vector<VariablePair> all_pairs(std::size_t n) {
  std::vector<VariablePair> out;
  out.reserve(pair_count(n));
  for (VariableId x = 0; x < n; ++x)
    for (VariableId y = x + 1; y < n; ++y) out.push_back({x, y});
  return out;
}

}  // namespace intervene
