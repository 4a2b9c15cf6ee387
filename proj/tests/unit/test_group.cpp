#include <doctest.h>

#include "oracle.hpp"
#include "smallsum/error.hpp"
#include "smallsum/group.hpp"
#include "smallsum/subgroup.hpp"

using namespace smallsum;

namespace {

SubsetMask mask(const GroupSpec& g, std::initializer_list<std::uint32_t> xs) {
  return SubsetMask::from_indices(g, xs);
}

}  // namespace

TEST_CASE("make_group orders and the trivial group") {
  CHECK(make_group({1}).order() == 1);
  CHECK(make_group({2, 2, 3}).order() == 12);
  CHECK_THROWS_AS(make_group({}), Error);
  CHECK_THROWS_AS(make_group({0}), Error);
  CHECK_THROWS_AS(make_group({1024, 2048}), Error);
  CHECK(parse_group("2,2,3") == make_group({2, 2, 3}));
}

TEST_CASE("cyclic addition in Z_6") {
  const GroupSpec g = make_group({6});
  CHECK(g.add(Element{5}, Element{3}) == Element{2});
  CHECK(g.neg(Element{1}) == Element{5});
  CHECK(g.element_order(Element{4}) == 3);
}

TEST_CASE("mixed radix puts the first factor most significant") {
  const GroupSpec g = make_group({2, 3});
  const std::int64_t d[] = {1, 2};
  CHECK(g.from_digits(d).idx == 5);
  CHECK(g.digits(Element{4}) == std::vector<std::uint32_t>{1, 1});
  const std::int64_t neg[] = {-1, -1};
  CHECK(g.from_digits(neg).idx == 5);
}

TEST_CASE("add, neg and multiple agree with digit arithmetic") {
  for (const auto& f : abelian_groups_up_to(16)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    for (std::uint32_t a = 0; a < g.order(); ++a) {
      CHECK(g.neg(Element{a}).idx == o.neg(a));
      std::uint32_t acc = 0;
      for (int k = 0; k < 5; ++k) {
        CHECK(g.multiple(Element{a}, k).idx == acc);
        acc = o.add(acc, a);
      }
      for (std::uint32_t b = 0; b < g.order(); ++b) {
        CHECK(g.add(Element{a}, Element{b}).idx == o.add(a, b));
        CHECK(g.sub(Element{a}, Element{b}).idx == o.add(a, o.neg(b)));
      }
    }
  }
}

TEST_CASE("abelian groups up to order 8") {
  const std::vector<std::vector<std::uint32_t>> want = {
      {2}, {3}, {4}, {2, 2}, {5}, {6}, {7}, {8}, {2, 4}, {2, 2, 2}};
  CHECK(abelian_groups_up_to(8) == want);
  CHECK(abelian_groups_of_order(16).size() == 5);
  CHECK(abelian_groups_of_order(72).size() == 6);
}

TEST_CASE("subgroup_generated") {
  const GroupSpec z6 = make_group({6});
  CHECK(subgroup_generated(z6, mask(z6, {2})).members == mask(z6, {0, 2, 4}));
  CHECK(subgroup_generated(z6, SubsetMask(z6)).members == mask(z6, {0}));
  const GroupSpec v = make_group({2, 2});
  CHECK(subgroup_generated(v, mask(v, {2, 1})).is_whole());
}

TEST_CASE("subgroup lattices") {
  const GroupSpec z6 = make_group({6});
  const auto subs = all_subgroups(z6);
  REQUIRE(subs.size() == 4);
  CHECK(subs[0].members == mask(z6, {0}));
  CHECK(subs[1].members == mask(z6, {0, 3}));
  CHECK(subs[2].members == mask(z6, {0, 2, 4}));
  CHECK(subs[3].is_whole());
  CHECK(all_subgroups(make_group({2, 2})).size() == 5);
  const auto t = all_subgroups(make_group({1}));
  REQUIRE(t.size() == 1);
  CHECK(t[0].is_trivial());
}

TEST_CASE("all_subgroups matches closed-subset enumeration") {
  for (const auto& f : abelian_groups_up_to(16)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    std::set<oracle::Set> want;
    for (const auto& h : o.subgroups()) want.insert(h);
    std::set<oracle::Set> got;
    for (const auto& h : all_subgroups(g)) {
      got.insert(oracle::to_set(h.members));
      CHECK(g.order() % h.order() == 0);
      CHECK(subgroup_generated(g, SubsetMask::from_elements(g, h.generators)) == h);
      CHECK(h.members.negate() == h.members);
    }
    CHECK(got == want);
  }
}

TEST_CASE("quotient Z_6 / {0,3}") {
  const GroupSpec z6 = make_group({6});
  const Morphism phi = quotient(z6, as_subgroup(mask(z6, {0, 3})));
  CHECK(phi.target.order() == 3);
  CHECK(phi.table[1] == phi.table[4]);
  CHECK(phi.table[0] != phi.table[1]);
  const Morphism id = quotient(z6, as_subgroup(mask(z6, {0})));
  CHECK(id.target.order() == 6);
  const Morphism one = quotient(z6, as_subgroup(SubsetMask::full(z6)));
  CHECK(one.target.order() == 1);
  CHECK_THROWS_AS(as_subgroup(mask(z6, {0, 1})), Error);
}

TEST_CASE("quotient maps are homomorphisms with the right fibers") {
  for (const auto& f : abelian_groups_up_to(16)) {
    const GroupSpec g = make_group(f);
    for (const auto& h : all_subgroups(g)) {
      const Morphism phi = quotient(g, h);
      CHECK(phi.target.order() * h.order() == g.order());
      for (std::uint32_t a = 0; a < g.order(); ++a) {
        CHECK((phi.table[a] == phi.table[0]) == h.members.contains(Element{a}));
        for (std::uint32_t b = 0; b < g.order(); ++b)
          CHECK(phi.table[g.add(Element{a}, Element{b}).idx] ==
                phi.target.add(Element{phi.table[a]}, Element{phi.table[b]}).idx);
      }
    }
  }
}

TEST_CASE("restriction embeds a subgroup as a group") {
  const GroupSpec g = make_group({2, 6});
  for (const auto& k : all_subgroups(g)) {
    const Embedding e = restrict_to(g, k);
    CHECK(e.group.order() == k.order());
    CHECK(e.image == k.members);
    for (std::uint32_t a = 0; a < e.group.order(); ++a)
      for (std::uint32_t b = 0; b < e.group.order(); ++b)
        CHECK(e.to_parent[e.group.add(Element{a}, Element{b}).idx] ==
              g.add(Element{e.to_parent[a]}, Element{e.to_parent[b]}).idx);
  }
}
