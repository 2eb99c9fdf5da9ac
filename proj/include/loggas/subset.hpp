#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace loggas {

/// Subset of particle indices {0, ..., n-1}, n <= 32.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) noexcept : bits_(bits) {}

  static SubsetMask of(std::initializer_list<std::size_t> members) {
    std::uint32_t b = 0;
    for (std::size_t i : members) b |= 1u << i;
    return SubsetMask(b);
  }

  static constexpr SubsetMask full(std::size_t n) noexcept {
    return SubsetMask(n >= 32 ? ~0u : ((1u << n) - 1u));
  }

  constexpr std::uint32_t bits() const noexcept { return bits_; }
  constexpr int size() const noexcept { return std::popcount(bits_); }
  constexpr bool contains(std::size_t i) const noexcept { return (bits_ >> i) & 1u; }
  constexpr bool empty() const noexcept { return bits_ == 0; }

  constexpr bool subset_of(SubsetMask o) const noexcept { return (bits_ & ~o.bits_) == 0; }
  constexpr bool disjoint(SubsetMask o) const noexcept { return (bits_ & o.bits_) == 0; }
  /// Nested in the laminar sense: one contains the other, or they are disjoint.
  constexpr bool nested_with(SubsetMask o) const noexcept {
    return subset_of(o) || o.subset_of(*this) || disjoint(o);
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

  /// Members with 1-based labels, e.g. "{1,3}".
  std::string label() const {
    std::string s = "{";
    bool first = true;
    for (std::size_t i : members()) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

  constexpr auto operator<=>(const SubsetMask&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Canonical order for reporting: by size, then by lowest differing member.
inline bool canonical_less(SubsetMask a, SubsetMask b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto ma = a.members(), mb = b.members();
  return ma < mb;
}

/// Pairwise nested (laminar) collection of subsets.
struct Nest {
  std::vector<SubsetMask> members;

  std::size_t size() const noexcept { return members.size(); }

  bool is_laminar() const {
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        if (!members[i].nested_with(members[j])) return false;
    return true;
  }

  friend bool operator==(const Nest&, const Nest&) = default;
};

}  // namespace loggas
