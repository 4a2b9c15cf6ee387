#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smallsum/group.hpp"

namespace smallsum {

/// A subset of a finite abelian group stored as a membership bitmask over
/// element indices. Cardinality is cached.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(GroupSpec group);

  static SubsetMask full(GroupSpec group);
  static SubsetMask from_indices(GroupSpec group, std::span<const std::uint32_t> indices);
  static SubsetMask from_indices(GroupSpec group, std::initializer_list<std::uint32_t> indices);
  static SubsetMask from_elements(GroupSpec group, std::span<const Element> elements);
  /// Bit i of `word` is element i; needs order <= 64.
  static SubsetMask from_word(GroupSpec group, std::uint64_t word);
  /// Parses the to_hex() form.
  static SubsetMask from_hex(GroupSpec group, std::string_view hex);

  const GroupSpec& group() const noexcept { return group_; }
  std::uint32_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(Element x) const noexcept {
    return (bits_[x.idx >> 6] >> (x.idx & 63)) & 1u;
  }
  void insert(Element x);
  void erase(Element x);

  /// Smallest element index; throws on the empty set.
  Element min_element() const;
  std::vector<Element> elements() const;
  std::vector<std::uint32_t> indices() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        const int b = std::countr_zero(word);
        f(Element{static_cast<std::uint32_t>(w * 64 + b)});
        word &= word - 1;
      }
    }
  }

  /// The mask as one word; throws when order > 64.
  std::uint64_t word() const;
  std::span<const std::uint64_t> words() const noexcept { return bits_; }

  SubsetMask complement() const;
  SubsetMask translate(Element g) const;
  SubsetMask negate() const;

  bool is_subset_of(const SubsetMask& other) const;
  bool intersects(const SubsetMask& other) const;

  SubsetMask& operator|=(const SubsetMask& other);
  SubsetMask& operator&=(const SubsetMask& other);
  SubsetMask& operator-=(const SubsetMask& other);
  friend SubsetMask operator|(SubsetMask a, const SubsetMask& b) { return a |= b; }
  friend SubsetMask operator&(SubsetMask a, const SubsetMask& b) { return a &= b; }
  friend SubsetMask operator-(SubsetMask a, const SubsetMask& b) { return a -= b; }
  friend bool operator==(const SubsetMask& a, const SubsetMask& b) noexcept {
    return a.group_ == b.group_ && a.bits_ == b.bits_;
  }

  /// Lowercase hex, most significant nibble first, ceil(order/4) digits,
  /// prefixed with "0x". Bit i is element i.
  std::string to_hex() const;
  std::size_t hash() const noexcept;

 private:
  void require_same_group(const SubsetMask& other) const;
  void recount() noexcept;
  void clear_tail() noexcept;

  GroupSpec group_;
  std::vector<std::uint64_t> bits_ = std::vector<std::uint64_t>(1, 0);
  std::uint32_t count_ = 0;
};

/// Lexicographic order of the ascending element-index lists. Used for every
/// tie-break that asks for the "lexicographically smallest" set.
bool lex_less(const SubsetMask& a, const SubsetMask& b);

struct SubsetMaskHash {
  std::size_t operator()(const SubsetMask& m) const noexcept { return m.hash(); }
};

}  // namespace smallsum
