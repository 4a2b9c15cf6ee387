#include <doctest.h>

#include <functional>
#include <random>

#include "oracle.hpp"
#include "smallsum/error.hpp"
#include "smallsum/isoperimetry.hpp"
#include "smallsum/setops.hpp"

using namespace smallsum;

namespace {

SubsetMask mask(const GroupSpec& g, std::initializer_list<std::uint32_t> xs) {
  return SubsetMask::from_indices(g, xs);
}

KappaOptions exact() {
  KappaOptions o;
  o.mode = KappaMode::kExact;
  return o;
}

// every S containing 0 in the group, as words
std::vector<SubsetMask> sets_with_zero(const GroupSpec& g) {
  std::vector<SubsetMask> out;
  const std::uint64_t half = std::uint64_t{1} << (g.order() - 1);
  for (std::uint64_t m = 0; m < half; ++m) out.push_back(SubsetMask::from_word(g, (m << 1) | 1));
  return out;
}

oracle::Set canonical(const oracle::Group& o, const oracle::Set& x) {
  oracle::Set best;
  bool first = true;
  for (auto a : x) {
    oracle::Set t = o.shift(x, o.neg(a));
    if (first || std::lexicographical_compare(t.begin(), t.end(), best.begin(), best.end())) best = t;
    first = false;
  }
  return best;
}

}  // namespace

TEST_CASE("kappa examples") {
  const GroupSpec z5 = make_group({5});
  const ConnectivityReport full = kappa(SubsetMask::full(z5), 2);
  CHECK_FALSE(full.separable);
  CHECK(full.kappa == 2);

  const GroupSpec z6 = make_group({6});
  const SubsetMask s = mask(z6, {0, 1});
  CHECK(kappa(s, 1).kappa == 1);
  const ConnectivityReport k2 = kappa(s, 2);
  CHECK(k2.kappa == 1);
  CHECK(k2.separable);
  CHECK(k2.atom_size == 2);
  REQUIRE(k2.atoms.size() == 1);
  CHECK(k2.atoms[0] == mask(z6, {0, 1}));
}

TEST_CASE("kappa needs 0 in S and a large enough group") {
  const GroupSpec z6 = make_group({6});
  CHECK_THROWS_AS(kappa(mask(z6, {1, 2}), 1), Error);
  CHECK_THROWS_AS(kappa(mask(z6, {0, 1}), 4), Error);
}

TEST_CASE("kappa, fragments and atoms agree with the full scan") {
  for (const auto& f : abelian_groups_up_to(9)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    for (const auto& s : sets_with_zero(g)) {
      const oracle::Set os = oracle::to_set(s);
      for (unsigned k = 1; 2 * k - 1 <= g.order() && k <= 3; ++k) {
        const ConnectivityReport r = kappa(s, k, exact());
        REQUIRE(r.kappa == o.kappa(os, k));
        const auto frags = o.fragments(os, k);
        CHECK(r.separable == !frags.empty());
        if (frags.empty()) continue;
        CHECK(r.fragments_complete);
        std::set<oracle::Set> want(frags.begin(), frags.end()), got;
        for (const auto& x : r.fragments) got.insert(oracle::to_set(x));
        CHECK(got == want);
        std::size_t min_size = g.order();
        for (const auto& x : frags) min_size = std::min(min_size, x.size());
        CHECK(r.atom_size == min_size);
        std::set<oracle::Set> atoms;
        for (const auto& x : frags)
          if (x.size() == min_size) atoms.insert(canonical(o, x));
        std::set<oracle::Set> got_atoms;
        for (const auto& a : r.atoms) got_atoms.insert(oracle::to_set(a));
        CHECK(got_atoms == atoms);
      }
    }
  }
}

TEST_CASE("kappa_profile matches per-level kappa") {
  const GroupSpec g = make_group({2, 4});
  for (const auto& s : sets_with_zero(g)) {
    const auto prof = kappa_profile(s, 4, exact());
    REQUIRE(prof.size() == 4);
    for (unsigned k = 1; k <= 4; ++k) CHECK(prof[k - 1].kappa == kappa(s, k, exact()).kappa);
  }
}

TEST_CASE("seeded kappa is an upper bound that matches on small groups") {
  KappaOptions seeded;
  seeded.mode = KappaMode::kSeeded;
  std::mt19937_64 rng(5);
  for (const auto& f : abelian_groups_up_to(12, 10)) {
    const GroupSpec g = make_group(f);
    for (int trial = 0; trial < 30; ++trial) {
      const SubsetMask s = SubsetMask::from_word(g, (rng() & ((1ull << g.order()) - 1)) | 1);
      for (unsigned k = 1; k <= 3; ++k) {
        const auto a = kappa(s, k, seeded).kappa;
        const auto b = kappa(s, k, exact()).kappa;
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("degeneracy, hyper-atom and super-atom") {
  const GroupSpec z6 = make_group({6});
  const SubsetMask s = mask(z6, {0, 3, 1});
  const oracle::Group o({6});
  const auto k2 = o.kappa(oracle::to_set(s), 2);
  const auto h_boundary = o.plus({0, 3}, oracle::to_set(s)).size() - 2;
  const DegeneracyResult d = is_degenerate(s);
  CHECK(d.kappa2 == k2);
  CHECK((d.status == Degeneracy::kDegenerate) == (h_boundary == k2));
  if (d.status == Degeneracy::kDegenerate) {
    CHECK(d.subgroup->members == mask(z6, {0, 3}));
    CHECK(hyper_atom(s).subgroup.members == mask(z6, {0, 3}));
  }

  const GroupSpec z7 = make_group({7});
  CHECK(is_degenerate(mask(z7, {0, 1, 3})).status != Degeneracy::kDegenerate);
  CHECK_THROWS_AS(hyper_atom(mask(z7, {0, 1, 3})), Error);

  const auto sa = find_super_atom(mask(z6, {1, 3}));
  REQUIRE(sa);
  CHECK(sa->kind == SuperAtom::Kind::kGeneratedSubgroup);
  CHECK(sa->subgroup.members == mask(z6, {0, 2, 4}));
  CHECK_FALSE(find_super_atom(mask(z7, {0, 1, 3})));
  CHECK_THROWS_AS(super_atom(mask(z7, {0, 1, 3})), Error);
}

TEST_CASE("degeneracy agrees with a subgroup scan against the full-scan kappa_2") {
  for (const auto& f : abelian_groups_up_to(10, 3)) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    const auto subs = o.subgroups();
    for (const auto& s : sets_with_zero(g)) {
      const oracle::Set os = oracle::to_set(s);
      const DegeneracyResult d = is_degenerate(s, exact());
      if (o.fragments(os, 2).empty()) {
        CHECK(d.status == Degeneracy::kNotSeparable);
        continue;
      }
      const auto k2 = o.kappa(os, 2);
      std::vector<oracle::Set> frag_subs;
      for (const auto& h : subs) {
        if (h.size() < 2) continue;
        const auto hs = o.plus(h, os);
        if (o.n - hs.size() >= 2 && hs.size() - h.size() == k2) frag_subs.push_back(h);
      }
      CHECK((d.status == Degeneracy::kDegenerate) == !frag_subs.empty());
      if (frag_subs.empty()) continue;
      std::size_t big = 0;
      for (const auto& h : frag_subs) big = std::max(big, h.size());
      const HyperAtom ha = hyper_atom(s, exact());
      CHECK(ha.subgroup.order() == big);
      CHECK(std::find(frag_subs.begin(), frag_subs.end(), oracle::to_set(ha.subgroup.members)) !=
            frag_subs.end());
      std::size_t maximal = 0;
      for (const auto& h : frag_subs) {
        bool inside = false;
        for (const auto& k : frag_subs)
          if (k != h && std::includes(k.begin(), k.end(), h.begin(), h.end())) inside = true;
        if (!inside) ++maximal;
      }
      CHECK(ha.unique == (maximal == 1));
    }
  }
}

TEST_CASE("fragments of -S are the negatives of fragments of S") {
  const GroupSpec z6 = make_group({6});
  const SubsetMask s = mask(z6, {0, 1});
  const oracle::Group o({6});
  std::set<oracle::Set> neg;
  for (const auto& x : negative_fragments(s, 1, exact())) neg.insert(oracle::to_set(x));
  std::set<oracle::Set> want;
  for (const auto& x : o.fragments(o.minus({0, 1}), 1)) want.insert(x);
  CHECK(neg == want);
  for (const auto& x : kappa(s, 1, exact()).fragments) CHECK(neg.count(oracle::to_set(x.negate())));

  const SubsetMask sym = mask(z6, {0, 1, 5});
  for (unsigned k = 1; k <= 2; ++k) {
    std::set<oracle::Set> a, b;
    for (const auto& x : negative_fragments(sym, k, exact())) a.insert(oracle::to_set(x));
    for (const auto& x : kappa(sym, k, exact()).fragments) b.insert(oracle::to_set(x));
    CHECK(a == b);
  }
}

namespace {

// Largest valid (T,S,H)-matching by trying every partial assignment.
std::size_t brute_matching(const oracle::Group& o, const oracle::Set& h, const std::vector<oracle::Set>& tp,
                           const std::vector<oracle::Set>& sp, const oracle::Set& t) {
  const oracle::Set th = o.plus(t, h);
  auto coset = [&](const oracle::Set& x) { return o.plus(x, h); };
  std::size_t best = 0;
  std::vector<oracle::Set> used;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t size) {
    best = std::max(best, size);
    if (i == tp.size()) return;
    go(i + 1, size);
    for (const auto& s : sp) {
      const oracle::Set c = coset(o.plus(tp[i], s));
      bool clash = false;
      for (auto x : c) clash = clash || th.count(x);
      for (const auto& u : used) clash = clash || u == c;
      if (clash) continue;
      used.push_back(c);
      go(i + 1, size + 1);
      used.pop_back();
    }
  };
  go(0, 0);
  return best;
}

}  // namespace

TEST_CASE("matchings are valid, maximum and meet the size bound") {
  for (const std::vector<std::uint32_t> f : {std::vector<std::uint32_t>{2, 6}, {12}, {2, 2, 3}, {2, 4}}) {
    const GroupSpec g = make_group(f);
    const oracle::Group o(f);
    int checked = 0;
    for (const auto& s : sets_with_zero(g)) {
      if (s.size() < 2 || s.size() > 5) continue;
      for (const auto& h : subgroup_fragments(s, 2, exact())) {
        if (h.is_whole() || h.is_trivial()) continue;
        const auto sp = coset_parts(s, h);
        const std::uint32_t u = sp.size() - 1;
        for (std::uint64_t tw = 1; tw < (1ull << g.order()); tw += 37) {
          const SubsetMask t = SubsetMask::from_word(g, tw);
          const auto tp = coset_parts(t, h);
          if (g.order() < (tp.size() + u) * h.order()) continue;
          const MatchingAssignment m = find_matching(t, s, h, exact());
          CHECK(m.size() >= std::min<std::size_t>(u, tp.size()));
          CHECK(m.meets_bound);
          std::vector<oracle::Set> otp, osp;
          for (const auto& p : m.t_parts) otp.push_back(oracle::to_set(p));
          for (const auto& p : m.s_parts) osp.push_back(oracle::to_set(p));
          const oracle::Set oh = oracle::to_set(h.members);
          CHECK(m.size() == brute_matching(o, oh, otp, osp, oracle::to_set(t)));
          const oracle::Set th = o.plus(oracle::to_set(t), oh);
          std::set<oracle::Set> cosets;
          for (const auto& [i, n] : m.assignment) {
            const oracle::Set c = o.plus(o.plus(otp[i], osp[n]), oh);
            for (auto x : c) CHECK_FALSE(th.count(x));
            CHECK(cosets.insert(c).second);
          }
          ++checked;
        }
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("a matching with u = 0 is empty") {
  const GroupSpec g = make_group({2, 6});
  const Subgroup h = as_subgroup(mask(g, {0, 3, 6, 9}));
  const SubsetMask s = mask(g, {0, 3});
  CHECK(kappa(s, 2, exact()).kappa == 0);
  const MatchingAssignment m = find_matching(mask(g, {1}), s, h);
  CHECK(m.size() == 0);
  CHECK(m.meets_bound);
  CHECK_THROWS_AS(find_matching(mask(g, {1}), mask(g, {1, 2}), h), Error);
}
