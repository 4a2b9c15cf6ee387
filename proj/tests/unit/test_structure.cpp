#include <doctest.h>

#include "oracle.hpp"
#include "smallsum/audit.hpp"
#include "smallsum/isoperimetry.hpp"
#include "smallsum/setops.hpp"
#include "smallsum/structure.hpp"

using namespace smallsum;

namespace {

SubsetMask mask(const GroupSpec& g, std::initializer_list<std::uint32_t> xs) {
  return SubsetMask::from_indices(g, xs);
}

// (r,-j)-progression test straight from the definition
bool is_rj(const oracle::Group& o, const oracle::Set& a, unsigned j) {
  if (a.size() == 1) return true;
  for (std::uint32_t r = 1; r < o.n; ++r) {
    std::uint32_t ord = 1;
    for (std::uint32_t x = r; x != 0; x = o.add(x, r)) ++ord;
    const std::uint32_t len = a.size() + j;
    if (len > ord) continue;
    for (std::uint32_t st = 0; st < o.n; ++st) {
      oracle::Set p;
      std::uint32_t e = st;
      for (std::uint32_t i = 0; i < len; ++i, e = o.add(e, r)) p.insert(e);
      if (std::includes(p.begin(), p.end(), a.begin(), a.end())) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("progression examples") {
  const GroupSpec z7 = make_group({7});
  const SubsetMask a = mask(z7, {0, 1, 3});
  CHECK(find_progression(a, 0) == std::nullopt);
  CHECK_FALSE(is_progression(a));
  const auto w = find_progression(a, 1, Element{1});
  REQUIRE(w);
  CHECK(w->start == Element{0});
  CHECK(w->length == 4);
  CHECK(w->deleted == std::vector<Element>{Element{2}});
  CHECK(reconstruct(z7, *w) == a);

  const GroupSpec z6 = make_group({6});
  const auto p = find_progression(mask(z6, {0, 2, 4}), 0);
  REQUIRE(p);
  CHECK(p->difference == Element{2});
  CHECK(p->wraps);

  const auto single = detect_progression(mask(z6, {4}), 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].wildcard);
  CHECK(is_progression(mask(z6, {4})));
}

TEST_CASE("progression detection matches the definition and witnesses reconstruct") {
  for (const auto& f : abelian_groups_up_to(12)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    for (std::uint64_t m = 1; m < (1ull << g.order()); m += (g.order() > 10 ? 3 : 1)) {
      const SubsetMask a = SubsetMask::from_word(g, m);
      const oracle::Set oa = oracle::to_set(a);
      const auto ws = detect_progression(a, 2);
      for (unsigned j = 0; j <= 2; ++j) {
        bool any = false;
        for (const auto& w : ws) any = any || w.wildcard || w.j() == j;
        CHECK(any == is_rj(o, oa, j));
        CHECK(find_progression(a, j).has_value() == is_rj(o, oa, j));
      }
      for (const auto& w : ws) {
        if (w.wildcard) continue;
        CHECK(reconstruct(g, w) == a);
        CHECK(g.element_order(w.difference) >= w.length);
        CHECK_FALSE(g.neg(w.difference) < w.difference);
      }
    }
  }
}

TEST_CASE("common progressions share a difference up to sign") {
  const GroupSpec z11 = make_group({11});
  const auto c = common_progression(mask(z11, {0, 2, 4}), 0, mask(z11, {1, 9, 7, 3}), 1);
  REQUIRE(c);
  CHECK(c->first.difference == c->second.difference);
  CHECK(reconstruct(z11, c->first) == mask(z11, {0, 2, 4}));
  CHECK(reconstruct(z11, c->second) == mask(z11, {1, 9, 7, 3}));
  CHECK_FALSE(common_progression(mask(z11, {0, 1, 2}), 0, mask(z11, {0, 2, 4}), 0));
}

TEST_CASE("H-decomposition examples") {
  const GroupSpec z6 = make_group({6});
  const Subgroup h = as_subgroup(mask(z6, {0, 3}));
  const HDecomposition d = h_decompose(mask(z6, {0, 1, 4}), h);
  REQUIRE(d.parts.size() == 2);
  CHECK(d.parts[0] == mask(z6, {0}));
  CHECK(d.parts[1] == mask(z6, {1, 4}));
  CHECK(d.is_progression);

  const HDecomposition whole = h_decompose(h.members, h);
  CHECK(whole.parts.size() == 1);
  CHECK(whole.is_progression);
  CHECK(whole.wildcard);

  const HDecomposition all = h_decompose(mask(z6, {0, 1, 2}), h);
  CHECK(all.parts.size() == 3);
  CHECK(all.is_progression);

  const GroupSpec z12 = make_group({12});
  const Subgroup h2 = as_subgroup(mask(z12, {0, 6}));
  // cosets 0, 1, 3 of Z_6: not a progression
  CHECK_FALSE(h_decompose(mask(z12, {0, 1, 3}), h2).is_progression);
}

TEST_CASE("H-progression orderings step by the difference") {
  for (const auto& f : abelian_groups_up_to(12, 4)) {
    const GroupSpec g = make_group(f);
    for (const auto& h : all_subgroups(g)) {
      if (h.is_trivial() || h.is_whole()) continue;
      const Morphism phi = quotient(g, h);
      for (std::uint64_t m = 1; m < (1ull << g.order()); m += 7) {
        const SubsetMask a = SubsetMask::from_word(g, m);
        for (const auto& d : h_progressions(a, phi)) {
          SubsetMask u(g);
          for (std::size_t i = 0; i < d.parts.size(); ++i) {
            u |= d.parts[i];
            CHECK(phi.image(d.parts[i]).size() == 1);
            if (i > 0 && !d.wildcard)
              CHECK(phi.target.add(d.cosets[i - 1], d.difference) == d.cosets[i]);
          }
          CHECK(u == a);
        }
      }
    }
  }
}

TEST_CASE("essential pair of kind i in Z_6") {
  const GroupSpec z6 = make_group({6});
  const Subgroup h = as_subgroup(mask(z6, {0, 3}));
  const SubsetMask s = mask(z6, {0, 1, 4, 2});
  const auto w = classify_essential_pair(s, s, h);
  REQUIRE(w);
  CHECK(w->kind == EssentialKind::kI);
  CHECK(sumset(s, h.members).size() - s.size() == 2);
  CHECK(w->s_decomp.parts.front().size() == 1);
  CHECK(w->s_decomp.parts.back().size() == 1);
}

TEST_CASE("Klein pair in Z_2 x Z_2 x Z_3") {
  const GroupSpec g = make_group({2, 2, 3});
  const Subgroup h = as_subgroup(mask(g, {0, 3, 6, 9}));
  const SubsetMask s = mask(g, {0, 6, 1, 4});
  const auto w = classify_essential_pair(s, s, h);
  REQUIRE(w);
  CHECK(w->kind == EssentialKind::kIII);
  REQUIRE(w->k0);
  REQUIRE(w->k1);
  CHECK(w->k0->order() == 2);
  CHECK(w->k1->order() == 2);
  CHECK((w->k0->members | w->k1->members).size() == 3);
  CHECK(audit::essential_kind(s, s, h) == 3);
}

TEST_CASE("no essential pair when |S+H| - |S| differs from |H|") {
  const GroupSpec z6 = make_group({6});
  const Subgroup h = as_subgroup(mask(z6, {0, 3}));
  CHECK_FALSE(classify_essential_pair(mask(z6, {0, 3, 1}), mask(z6, {0, 1, 4, 2}), h));
}

TEST_CASE("essential pair recognizer agrees with a direct search") {
  for (const auto& f : abelian_groups_up_to(8, 4)) {
    const GroupSpec g = make_group(f);
    for (const auto& h : all_subgroups(g)) {
      if (h.is_trivial() || h.is_whole()) continue;
      for (std::uint64_t sm = 1; sm < (1ull << g.order()); sm += 2) {
        const SubsetMask s = SubsetMask::from_word(g, sm);
        for (std::uint64_t tm = 1; tm < (1ull << g.order()); tm += 3) {
          const SubsetMask t = SubsetMask::from_word(g, tm);
          const auto w = classify_essential_pair(s, t, h);
          const int kind = audit::essential_kind(s, t, h);
          CHECK((w ? static_cast<int>(w->kind) : 0) == kind);
          if (!w) continue;
          CHECK(sumset(s, h.members).size() - s.size() == h.order());
          CHECK(sumset(t, h.members).size() - t.size() == h.order());
          CHECK(same_difference(w->s_decomp, w->t_decomp));
        }
      }
    }
  }
}

TEST_CASE("Vosper sets") {
  const GroupSpec z5 = make_group({5});
  const oracle::Group o5({5});
  CHECK(is_vosper(mask(z5, {0, 1, 3})) == o5.vosper({0, 1, 3}));
  CHECK(is_vosper(SubsetMask::full(z5)));
  const GroupSpec z8 = make_group({8});
  // X = {0, 4} gives |X + S| = 4 < |X| + |S|
  CHECK_FALSE(is_vosper(mask(z8, {0, 1})));
  for (const auto& f : abelian_groups_up_to(10, 3)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    for (std::uint64_t m = 1; m < (1ull << g.order()); m += 2)
      CHECK(is_vosper(SubsetMask::from_word(g, m)) == o.vosper(oracle::from_word(m)));
  }
}

TEST_CASE("quasi-periodic partitions") {
  const GroupSpec z6 = make_group({6});
  const Subgroup h = as_subgroup(mask(z6, {0, 3}));
  const auto one = quasi_periodic_partitions(mask(z6, {1, 4}), h);
  REQUIRE(one.size() == 1);
  CHECK(one[0].a0.empty());
  CHECK(one[0].a1 == mask(z6, {1, 4}));

  const auto plus = quasi_periodic_partitions(mask(z6, {0, 3, 1}), h);
  REQUIRE(plus.size() == 1);
  CHECK(plus[0].a0 == mask(z6, {0, 3}));
  CHECK(plus[0].a1 == mask(z6, {1}));

  CHECK(quasi_periodic_partitions(mask(z6, {0, 1}), h).empty());

  for (const auto& f : abelian_groups_up_to(10, 4)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    for (const auto& hh : all_subgroups(g)) {
      const oracle::Set oh = oracle::to_set(hh.members);
      for (std::uint64_t m = 1; m < (1ull << g.order()); m += 3) {
        const oracle::Set a = oracle::from_word(m);
        std::set<std::pair<oracle::Set, oracle::Set>> want;
        for (std::uint32_t c = 0; c < o.n; ++c) {
          oracle::Set a1;
          for (auto x : o.shift(oh, c))
            if (a.count(x)) a1.insert(x);
          if (a1.empty()) continue;
          oracle::Set a0;
          for (auto x : a)
            if (!a1.count(x)) a0.insert(x);
          if (o.plus(a0, oh) == a0) want.insert({a0, a1});
        }
        std::set<std::pair<oracle::Set, oracle::Set>> got;
        for (const auto& p : quasi_periodic_partitions(SubsetMask::from_word(g, m), hh))
          got.insert({oracle::to_set(p.a0), oracle::to_set(p.a1)});
        CHECK(got == want);
      }
    }
  }
}

TEST_CASE("(H,-nu)-periodic sets") {
  const GroupSpec z6 = make_group({6});
  const Subgroup h = as_subgroup(mask(z6, {0, 3}));
  CHECK(is_h_minus_periodic(mask(z6, {0, 3, 1}), h, 1));
  CHECK_FALSE(is_h_minus_periodic(mask(z6, {0, 3, 1}), h, 0));
  CHECK(is_h_minus_periodic(mask(z6, {0, 3}), h, 0));
  CHECK(is_h_minus_periodic(mask(z6, {0, 3}), h, 2));
  CHECK_FALSE(is_h_minus_periodic(mask(z6, {0, 3}), h, 1));
}
