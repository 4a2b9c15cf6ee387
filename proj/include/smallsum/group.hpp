#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smallsum/error.hpp"

namespace smallsum {

inline constexpr std::uint32_t kDefaultOrderCap = 1u << 20;

/// An element of a GroupSpec, addressed by its mixed-radix index.
struct Element {
  std::uint32_t idx = 0;
  friend constexpr auto operator<=>(Element, Element) = default;
};

/// A finite abelian group Z_{d_1} x ... x Z_{d_m}.
///
/// Elements are indexed in mixed radix with d_1 most significant, so the
/// element with digits (a_1, ..., a_m) has index sum a_i * (d_{i+1} ... d_m).
/// Instances are immutable and cheap to copy; copies share their tables.
class GroupSpec {
 public:
  /// The trivial group, factors [1].
  GroupSpec();

  const std::vector<std::uint32_t>& factors() const noexcept;
  std::uint32_t order() const noexcept;

  Element zero() const noexcept { return Element{0}; }
  Element add(Element a, Element b) const noexcept;
  Element sub(Element a, Element b) const noexcept;
  Element neg(Element a) const noexcept;
  Element multiple(Element a, std::int64_t k) const noexcept;
  std::uint32_t element_order(Element a) const;

  std::vector<std::uint32_t> digits(Element a) const;
  /// Each digit is reduced modulo its factor, negative values included.
  Element from_digits(std::span<const std::int64_t> digits) const;

  /// Index-level add table, present when order() <= kTableOrder.
  const std::uint32_t* add_table() const noexcept;
  static constexpr std::uint32_t kTableOrder = 256;

  std::string to_string() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) noexcept;

 private:
  struct Impl;
  explicit GroupSpec(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;

  friend GroupSpec make_group(std::vector<std::uint32_t> factors, std::uint32_t cap);
};

/// Builds Z_{d_1} x ... x Z_{d_m}. Throws Error on an empty factor list, a
/// zero factor, or an order above `cap`.
GroupSpec make_group(std::vector<std::uint32_t> factors, std::uint32_t cap = kDefaultOrderCap);

/// Parses "2,2,3" into a group.
GroupSpec parse_group(const std::string& literal, std::uint32_t cap = kDefaultOrderCap);

/// Abelian groups of order n up to isomorphism, as invariant-factor lists
/// d_1 | d_2 | ... | d_m in ascending order. Sorted by factor count, then
/// lexicographically: 8 -> [8], [2,4], [2,2,2].
std::vector<std::vector<std::uint32_t>> abelian_groups_of_order(std::uint32_t n);

/// Concatenation of abelian_groups_of_order over min_order..max_order.
std::vector<std::vector<std::uint32_t>> abelian_groups_up_to(std::uint32_t max_order,
                                                             std::uint32_t min_order = 2);

}  // namespace smallsum
