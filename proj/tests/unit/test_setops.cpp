#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "smallsum/error.hpp"
#include "smallsum/setops.hpp"
#include "smallsum/subgroup.hpp"

using namespace smallsum;

namespace {

SubsetMask mask(const GroupSpec& g, std::initializer_list<std::uint32_t> xs) {
  return SubsetMask::from_indices(g, xs);
}

SubsetMask random_set(const GroupSpec& g, std::mt19937_64& rng) {
  SubsetMask s(g);
  for (std::uint32_t x = 0; x < g.order(); ++x)
    if (rng() % 3 == 0) s.insert(Element{x});
  return s;
}

}  // namespace

TEST_CASE("sumset examples") {
  const GroupSpec z5 = make_group({5});
  CHECK(sumset(mask(z5, {0, 1}), mask(z5, {0, 2})) == mask(z5, {0, 1, 2, 3}));
  const SubsetMask a = mask(z5, {1, 4});
  CHECK(sumset(a, mask(z5, {0})) == a);
  CHECK(sumset(a, SubsetMask(z5)).empty());
}

TEST_CASE("boundary and exterior") {
  const GroupSpec z6 = make_group({6});
  const SubsetMask s = mask(z6, {0, 1});
  CHECK(boundary(s, mask(z6, {0})) == mask(z6, {1}));
  CHECK(boundary(s, SubsetMask::full(z6)).empty());
  CHECK(boundary(mask(z6, {0}), mask(z6, {2, 5})).empty());
  CHECK(exterior(s, mask(z6, {0, 1})) == mask(z6, {3, 4, 5}));
  CHECK(exterior(s, SubsetMask(z6)) == SubsetMask::full(z6));
  CHECK(exterior(s, mask(z6, {0, 1, 2, 3, 4})).empty());
}

TEST_CASE("period examples") {
  const GroupSpec z4 = make_group({4});
  CHECK(period(mask(z4, {0, 2})).members == mask(z4, {0, 2}));
  CHECK(period(mask(z4, {0, 1})).is_trivial());
  CHECK(period(SubsetMask::full(z4)).is_whole());
  CHECK(is_aperiodic(mask(z4, {0, 1})));
  CHECK_THROWS_AS(period(SubsetMask(z4)), Error);
}

TEST_CASE("normalize examples") {
  const GroupSpec z6 = make_group({6});
  auto [x, t] = normalize(mask(z6, {2, 3, 5}));
  CHECK(x == mask(z6, {0, 1, 3}));
  CHECK(t == Element{2});
  auto [y, u] = normalize(mask(z6, {0, 4}));
  CHECK(y == mask(z6, {0, 4}));
  CHECK(u == Element{0});
  auto [z, v] = normalize(mask(z6, {4}));
  CHECK(z == mask(z6, {0}));
  CHECK(v == Element{4});
}

TEST_CASE("is_generating examples") {
  const GroupSpec z6 = make_group({6});
  CHECK(is_generating(mask(z6, {0, 1})));
  CHECK_FALSE(is_generating(mask(z6, {0, 2})));
  const GroupSpec one = make_group({1});
  CHECK(is_generating(mask(one, {0})));
}

TEST_CASE("set operations agree with the naive oracle") {
  std::mt19937_64 rng(7);
  for (const auto& f : abelian_groups_up_to(24)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    for (int trial = 0; trial < 20; ++trial) {
      const SubsetMask a = random_set(g, rng), b = random_set(g, rng);
      const oracle::Set sa = oracle::to_set(a), sb = oracle::to_set(b);
      CHECK(oracle::to_set(sumset(a, b)) == o.plus(sa, sb));
      CHECK(oracle::to_set(a.negate()) == o.minus(sa));
      oracle::Set diff = o.plus(sa, o.minus(sb));
      CHECK(oracle::to_set(difference_set(a, b)) == diff);
      if (!a.empty()) CHECK(oracle::to_set(period(a).members) == o.period(sa));
      CHECK(oracle::to_set(multiple_sumset(a, 2)) == o.plus(sa, sa));
      if (!a.empty()) {
        const oracle::Set gen = o.generated(o.plus(sa, o.minus(sa)));
        CHECK(is_generating(a) == (gen.size() == o.n));
      }
    }
  }
}

TEST_CASE("sumset is commutative, associative and translation compatible") {
  std::mt19937_64 rng(11);
  for (const auto& f : abelian_groups_up_to(20)) {
    const GroupSpec g = make_group(f);
    for (int trial = 0; trial < 10; ++trial) {
      const SubsetMask a = random_set(g, rng), b = random_set(g, rng), c = random_set(g, rng);
      const Element x{static_cast<std::uint32_t>(rng() % g.order())};
      CHECK(sumset(a, b) == sumset(b, a));
      CHECK(sumset(sumset(a, b), c) == sumset(a, sumset(b, c)));
      CHECK(sumset(a.translate(x), b) == sumset(a, b).translate(x));
    }
  }
}

TEST_CASE("period is a subgroup fixing the set") {
  std::mt19937_64 rng(3);
  for (const auto& f : abelian_groups_up_to(16)) {
    const GroupSpec g = make_group(f);
    for (int trial = 0; trial < 10; ++trial) {
      SubsetMask a = random_set(g, rng);
      if (a.empty()) continue;
      const Subgroup h = period(a);
      CHECK(is_subgroup(h.members));
      CHECK(is_periodic_by(a, h));
      CHECK(sumset(a, h.members) == a);
    }
  }
}

TEST_CASE("subset mask utilities") {
  const GroupSpec g = make_group({2, 6});
  const SubsetMask a = mask(g, {0, 3, 7, 11});
  CHECK(SubsetMask::from_hex(g, a.to_hex()) == a);
  CHECK(SubsetMask::from_word(g, a.word()) == a);
  CHECK(a.complement().size() == 8);
  CHECK(lex_less(mask(g, {0, 1}), mask(g, {0, 2})));
  CHECK(lex_less(mask(g, {0}), mask(g, {0, 1})));
  CHECK_FALSE(lex_less(a, a));
}
