#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "smallsum/group.hpp"
#include "smallsum/subset.hpp"

namespace smallsum {

struct Subgroup {
  SubsetMask members;
  /// Irredundant generating list: each generator lies outside the subgroup
  /// generated by the ones before it.
  std::vector<Element> generators;

  std::uint32_t order() const noexcept { return members.size(); }
  bool is_trivial() const noexcept { return members.size() == 1; }
  bool is_whole() const noexcept { return members.size() == members.group().order(); }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members == b.members; }
};

/// The subgroup generated by `seeds` (the trivial subgroup for no seeds).
Subgroup subgroup_generated(const GroupSpec& g, const SubsetMask& seeds);

/// True when `mask` contains 0 and is closed under addition.
bool is_subgroup(const SubsetMask& mask);

/// Wraps a closed mask as a Subgroup; throws Error when it is not closed.
Subgroup as_subgroup(const SubsetMask& mask);

/// Every subgroup exactly once, sorted by (order, lex_less of members).
/// Throws Error when more than `max_count` subgroups are found.
std::vector<Subgroup> all_subgroups(const GroupSpec& g, std::size_t max_count = 200000);

/// all_subgroups memoized per factor list for the life of the process.
std::shared_ptr<const std::vector<Subgroup>> cached_subgroups(const GroupSpec& g);

/// The canonical map G -> G/H.
///
/// `target` is a cyclic decomposition of G/H in invariant-factor form and
/// `table` sends each element index of G to its image index in `target`.
/// `representatives[c]` is the smallest element index of the fiber over c.
struct Morphism {
  GroupSpec source;
  Subgroup kernel;
  GroupSpec target;
  std::vector<std::uint32_t> table;
  std::vector<std::uint32_t> representatives;

  Element apply(Element x) const { return Element{table[x.idx]}; }
  SubsetMask image(const SubsetMask& a) const;
  SubsetMask preimage(const SubsetMask& c) const;
  /// Index of the coset of x when cosets are ranked by smallest member.
  std::uint32_t coset_rank(Element x) const;
};

/// Throws Error when `h` is not a subgroup of `g`.
Morphism quotient(const GroupSpec& g, const Subgroup& h);

/// A subgroup K of G presented as a standalone group, with the embedding.
struct Embedding {
  GroupSpec group;
  std::vector<std::uint32_t> to_parent;  // element of `group` -> element of G
  SubsetMask image;                      // K as a subset of G
  SubsetMask pull_back(const SubsetMask& in_parent) const;  // parent set inside K
};

Embedding restrict_to(const GroupSpec& g, const Subgroup& k);

}  // namespace smallsum
