#include "smallsum/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "smallsum/audit.hpp"
#include "smallsum/setops.hpp"
#include "smallsum/structure.hpp"

namespace smallsum {

namespace {

std::int64_t sz(const SubsetMask& x) { return static_cast<std::int64_t>(x.size()); }

CheckOutcome fail(CheckOutcome o, std::string clause) {
  o.failure = std::move(clause);
  return o;
}

// Sets of a group of order <= 64 as words, with S + x precomputed.
struct Words {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> s_plus;   // S + x
  std::vector<std::uint64_t> s_minus;  // x - S
  std::uint64_t s_star = 0;            // S \ {0}
  std::vector<std::uint64_t> s_star_minus;  // x - S*

  explicit Words(const SubsetMask& s) : n(s.group().order()) {
    const SubsetMask neg = s.negate();
    SubsetMask star = s;
    star.erase(Element{0});
    const SubsetMask neg_star = star.negate();
    s_star = star.word();
    for (std::uint32_t x = 0; x < n; ++x) {
      s_plus.push_back(s.translate(Element{x}).word());
      s_minus.push_back(neg.translate(Element{x}).word());
      s_star_minus.push_back(neg_star.translate(Element{x}).word());
    }
  }

  std::uint64_t sum(std::uint64_t x) const {
    std::uint64_t r = 0;
    while (x) {
      r |= s_plus[std::countr_zero(x)];
      x &= x - 1;
    }
    return r;
  }
  std::uint64_t full() const { return n == 64 ? ~0ull : ((1ull << n) - 1); }
};

int pc(std::uint64_t x) { return std::popcount(x); }

unsigned max_level(std::uint32_t n, unsigned k_max) {
  return std::min<unsigned>(k_max, (n + 1) / 2);
}

bool vosper_cached(const SubsetMask& s, CheckContext& ctx) {
  const SubsetMask s0 = normalize(s).first;
  const auto key = std::make_pair(s0.group().factors(),
                                  std::vector<std::uint64_t>(s0.words().begin(), s0.words().end()));
  if (auto it = ctx.vosper.find(key); it != ctx.vosper.end()) return it->second;
  bool v = true;
  if (s0.group().order() >= 3) {
    const auto& r = ctx.ws.kappa(s0, 2);
    v = !r.separable || r.kappa >= s0.size();
  }
  ctx.vosper.emplace(key, v);
  return v;
}

// ---- classifier statements ------------------------------------------------

CheckOutcome classifier_check(TheoremId id, const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  if (hypothesis_failure(id, inst, ctx.ws)) return o;
  o.applicable = true;
  StructureVerdict v = find_cases(id, inst, ctx.ws);
  if (!v.counterexample) {
    const audit::AuditResult r = audit::audit_verdict(v, ctx.ws);
    if (!r.ok) {
      v.counterexample = true;
      v.failed_clause = "audit:" + r.reason;
    }
  }
  for (const auto& c : v.cases) o.labels.push_back(c.label);
  o.principal = v.principal;
  if (v.counterexample) o.failure = v.failed_clause;
  return o;
}

// ---- sumset statements ----------------------------------------------------

CheckOutcome kneser(const PairInstance& inst, CheckContext&) {
  CheckOutcome o;
  const SubsetMask sum = sumset(inst.s, inst.t);
  if (!is_aperiodic(sum)) return o;
  o.applicable = true;
  o.labels = {"holds"};
  if (sz(sum) < sz(inst.s) + sz(inst.t) - 1) return fail(o, "bound");
  return o;
}

CheckOutcome check_cover(const PairInstance& inst, CheckContext&) {
  CheckOutcome o;
  if (inst.s.size() + inst.t.size() < inst.group.order() + 1) return o;
  o.applicable = true;
  o.labels = {"holds"};
  if (sumset(inst.s, inst.t).size() != inst.group.order()) return fail(o, "covers");
  return o;
}

CheckOutcome scherk(const PairInstance& inst, CheckContext&) {
  CheckOutcome o;
  const GroupSpec& g = inst.group;
  std::vector<std::uint32_t> reps(g.order(), 0);
  const auto a = inst.s.indices();
  const auto b = inst.t.indices();
  for (auto x : a)
    for (auto y : b) ++reps[g.add(Element{x}, Element{y}).idx];
  // |A n (c - B)| is the number of representations of c
  if (std::find(reps.begin(), reps.end(), 1u) == reps.end()) return o;
  o.applicable = true;
  o.labels = {"holds"};
  if (sz(sumset(inst.s, inst.t)) < sz(inst.s) + sz(inst.t) - 1) return fail(o, "bound");
  return o;
}

// S is inst.s (contains 0), X is inst.t.
CheckOutcome duality(const PairInstance& inst, CheckContext&) {
  CheckOutcome o;
  o.applicable = true;
  const SubsetMask& s = inst.s;
  const SubsetMask& x = inst.t;
  const SubsetMask xs_sum = sumset(x, s);
  const SubsetMask xs = xs_sum.complement();
  const SubsetMask back_sum = sumset(xs, s.negate());
  const SubsetMask back = back_sum.complement();
  if (!x.is_subset_of(back)) return fail(o, "inclusion");
  if (sumset(back, s) != xs_sum) return fail(o, "same_sumset");
  o.labels = {"inclusion"};
  const std::int64_t mu = sz(x) + sz(s) - sz(xs_sum);
  if (mu < 0 || xs.empty() || !is_aperiodic(xs_sum)) return o;
  o.labels.push_back("quantified");
  if (!is_aperiodic(back_sum)) return fail(o, "dual_aperiodic");
  const std::int64_t zeta = sz(xs) + sz(s) - sz(back_sum);
  if (zeta < 0 || zeta > 1) return fail(o, "zeta");
  if (sz(back) != sz(x) + zeta - mu) return fail(o, "identity");
  return o;
}

// ---- connectivity statements ----------------------------------------------

CheckOutcome check_one_atoms(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  if (!is_generating(s)) return o;
  o.applicable = true;
  const auto& r = ctx.ws.kappa(s, 1);
  if (2 * std::int64_t{r.kappa} < sz(s)) return fail(o, "kappa_bound");
  if (!r.separable) {
    o.labels = {"not_separable"};
    return o;
  }
  o.labels = {"separable"};
  for (const auto& a : r.atoms) {
    if (!is_subgroup(a)) return fail(o, "atom_subgroup");
    for (const auto& f : r.fragments)
      if (sumset(f, a) != f) return fail(o, "fragment_periodic");
  }
  return o;
}

CheckOutcome check_two_atoms(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::int64_t n = inst.group.order();
  if (n < 3 || !is_generating(s)) return o;
  const auto& r = ctx.ws.kappa(s, 2);
  if (!r.separable || r.kappa > s.size()) return o;
  if (r.kappa == s.size() && sz(s) == n - 6) return o;
  o.applicable = true;
  for (const auto& a : r.atoms) {
    if (is_subgroup(a)) {
      o.labels.push_back("subgroup");
    } else if (a.size() == 2) {
      o.labels.push_back("size_two");
    } else {
      return fail(o, "atom_shape");
    }
  }
  return o;
}

CheckOutcome check_fragment_closure(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::uint32_t n = inst.group.order();
  if (!is_generating(s) || n > 64) return o;
  const Words w(s);
  for (unsigned k = 1; k <= max_level(n, 3); ++k) {
    const auto& r = ctx.ws.kappa(s, k);
    if (!r.separable || !r.fragments_complete) continue;
    o.applicable = true;
    std::vector<std::uint64_t> f;
    for (const auto& x : r.fragments) f.push_back(x.word());
    const int kk = static_cast<int>(k);
    auto is_fragment = [&](std::uint64_t x) {
      const std::uint64_t xs = w.sum(x);
      return pc(x) >= kk && static_cast<int>(n) - pc(xs) >= kk &&
             pc(xs) - pc(x) == static_cast<int>(r.kappa);
    };
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = i + 1; j < f.size(); ++j) {
        const std::uint64_t meet = f[i] & f[j];
        const std::uint64_t join = f[i] | f[j];
        if (pc(meet) < kk || pc(w.sum(join)) > static_cast<int>(n) - kk) continue;
        if (!is_fragment(meet)) return fail(o, "intersection");
        if (!is_fragment(join)) return fail(o, "union");
      }
    }
  }
  if (o.applicable) o.labels = {"holds"};
  return o;
}

CheckOutcome check_atom_inside(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::uint32_t n = inst.group.order();
  if (!is_generating(s) || n > 64) return o;
  for (unsigned k = 1; k <= max_level(n, 3); ++k) {
    const auto& r = ctx.ws.kappa(s, k);
    if (!r.separable || !r.fragments_complete) continue;
    o.applicable = true;
    std::vector<std::uint64_t> atoms;
    std::vector<std::uint64_t> frags;
    for (const auto& x : r.fragments) {
      frags.push_back(x.word());
      if (x.size() == r.atom_size) atoms.push_back(x.word());
    }
    for (auto a : atoms)
      for (auto f : frags)
        if (pc(a & f) >= static_cast<int>(k) && (a & ~f)) return fail(o, "containment");
  }
  if (o.applicable) o.labels = {"holds"};
  return o;
}

CheckOutcome check_negation(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::uint32_t n = inst.group.order();
  if (!is_generating(s) || n > 64) return o;
  const SubsetMask neg = s.negate();
  for (unsigned k = 1; k <= max_level(n, 3); ++k) {
    const auto& r = ctx.ws.kappa(s, k);
    if (!r.separable || !r.fragments_complete) continue;
    o.applicable = true;
    const auto& rn = ctx.ws.kappa(neg, k);
    if (rn.kappa != r.kappa) return fail(o, "kappa_symmetry");
    std::unordered_set<std::uint64_t> nf;
    for (const auto& x : rn.fragments) nf.insert(x.word());
    for (const auto& x : r.fragments) {
      if (!nf.count(x.negate().word())) return fail(o, "negated_fragment");
      const SubsetMask ext = exterior(s, x);
      if (!nf.count(ext.word())) return fail(o, "exterior_fragment");
      if (ext.size() < r.atom_size) return fail(o, "exterior_size");
    }
  }
  if (o.applicable) o.labels = {"holds"};
  return o;
}

// ---- Vosper and progression statements ------------------------------------

CheckOutcome check_small_kappa2(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::int64_t n = inst.group.order();
  if (n < 3 || 2 * sz(s) > n + 1 || !is_generating(s)) return o;
  if (ctx.ws.kappa(s, 2).kappa + 1 > s.size()) return o;
  if (is_progression(s)) return o;
  o.applicable = true;
  o.labels = {"degenerate"};
  if (ctx.ws.degeneracy(s).status != Degeneracy::kDegenerate) return fail(o, "degenerate");
  return o;
}

CheckOutcome check_hyper_quotient(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::int64_t n = inst.group.order();
  if (n < 3 || 2 * sz(s) >= n || !is_generating(s)) return o;
  if (ctx.ws.degeneracy(s).status != Degeneracy::kDegenerate) return o;
  if (ctx.ws.kappa(s, 2).kappa > s.size()) return o;
  o.applicable = true;
  const auto& h = ctx.ws.hyper_atom(s);
  const Morphism& phi = ctx.ws.quotient(h->subgroup);
  const SubsetMask img = phi.image(s);
  if (is_progression(img)) o.labels.push_back("progression");
  if (vosper_cached(img, ctx)) o.labels.push_back("vosper");
  if (o.labels.empty()) return fail(o, "quotient_shape");
  return o;
}

CheckOutcome check_near_pair(const PairInstance& inst, CheckContext&) {
  CheckOutcome o;
  const SubsetMask& a = inst.s;
  const SubsetMask& b = inst.t;
  if (a.size() < 3 || b.size() < 3) return o;
  const Subgroup k = subgroup_generated(inst.group, a);
  if (!b.is_subset_of(k.members)) return o;
  const SubsetMask sum = sumset(a, b);
  if (sz(sum) > sz(a) + sz(b) || sz(a) + sz(b) > std::int64_t{k.order()} - 4) return o;
  if (!is_aperiodic(sum)) return o;
  std::vector<ProgressionWitness> ws;
  for (auto& w : detect_progression(a, 1))
    if (!w.wildcard && w.j() == 1) ws.push_back(w);
  if (ws.empty()) return o;
  o.applicable = true;
  o.labels = {"holds"};
  for (const auto& w : ws)
    if (!find_progression(b, 1, w.difference)) return fail(o, "progression");
  return o;
}

CheckOutcome check_remove_one(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const SubsetMask& x = inst.t;
  if (x.size() < s.size()) return o;
  if (sz(sumset(x, s)) != sz(x) + sz(s) - 1) return o;
  if (!is_generating(s)) return o;
  const bool prog = is_progression(s);
  const bool vos = vosper_cached(s, ctx);
  if (!prog && !vos) return o;
  o.applicable = true;
  o.labels = {prog ? "progression" : "vosper"};
  bool bad = false;
  s.for_each([&](Element y) {
    SubsetMask rest = s;
    rest.erase(y);
    if (sz(sumset(x, rest)) < sz(x) + sz(s) - 2) bad = true;
  });
  if (bad) return fail(o, "bound");
  return o;
}

CheckOutcome check_matching(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const SubsetMask& t = inst.t;
  const std::int64_t n = inst.group.order();
  if (n < 3) return o;
  const auto& r = ctx.ws.kappa(s, 2);
  if (!r.separable) return o;
  for (const auto& h : ctx.ws.subgroups(inst.group)) {
    if (h.order() < 2) continue;
    const std::int64_t hs = sumset(h.members, s).size();
    if (n - hs < 2 || hs - h.order() != r.kappa) continue;
    const Morphism& phi = ctx.ws.quotient(h);
    const std::int64_t u = sz(phi.image(s)) - 1;
    const std::int64_t tt = sz(phi.image(t)) - 1;
    if (n < (tt + u + 1) * h.order()) continue;
    o.applicable = true;
    const MatchingAssignment m = ctx.ws.matching(t, s, h);
    // J lies in [0, t], so no matching is larger than t + 1
    if (static_cast<std::int64_t>(m.size()) < std::min(u, tt + 1)) return fail(o, "matching_size");
  }
  if (o.applicable) o.labels = {"holds"};
  return o;
}

// ---- atom statements ------------------------------------------------------

CheckOutcome check_arcs(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::uint32_t n = inst.group.order();
  if (!is_generating(s) || n > 64) return o;
  const Words w(s);
  for (unsigned k = 1; k <= max_level(n, 3); ++k) {
    const auto& r = ctx.ws.kappa(s, k);
    if (!r.separable) continue;
    for (const auto& atom : r.atoms) {
      if (atom.size() < k + 1) continue;
      o.applicable = true;
      const std::uint64_t a = atom.word();
      const std::uint64_t reach = w.sum(a);
      for (std::uint64_t x = reach; x; x &= x - 1) {
        const int b = std::countr_zero(x);
        if (pc(w.s_minus[b] & a) < 2) return fail(o, "two_arcs");
      }
      std::int64_t arcs = 0;
      for (std::uint64_t x = a; x; x &= x - 1) arcs += pc(w.s_star_minus[std::countr_zero(x)] & a);
      const std::int64_t size = pc(a);
      if (arcs < size) return fail(o, "arc_lower");
      if (arcs > (sz(s) - 1) * size - 2 * std::int64_t{r.kappa}) return fail(o, "arc_upper");
    }
  }
  if (o.applicable) o.labels = {"holds"};
  return o;
}

// Cosets of prime-order subgroups, as words.
std::vector<std::uint64_t> minimal_cosets(const GroupSpec& g) {
  std::set<std::uint64_t> out;
  for (std::uint32_t q = 1; q < g.order(); ++q) {
    const std::uint32_t ord = g.element_order(Element{q});
    bool prime = ord > 1;
    for (std::uint32_t d = 2; d * d <= ord; ++d)
      if (ord % d == 0) prime = false;
    if (!prime) continue;
    SubsetMask seed(g);
    seed.insert(Element{q});
    const SubsetMask sub = subgroup_generated(g, seed).members;
    for (std::uint32_t x = 0; x < g.order(); ++x) out.insert(sub.translate(Element{x}).word());
  }
  return {out.begin(), out.end()};
}

CheckOutcome check_aperiodic_atoms(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::int64_t n = inst.group.order();
  if (n > 64 || 2 * sz(s) > n - 4 || !is_generating(s)) return o;
  const auto& r2 = ctx.ws.kappa(s, 2);
  if (!r2.separable || r2.kappa != s.size()) return o;
  if (ctx.ws.degeneracy(s).status == Degeneracy::kDegenerate) return o;
  o.applicable = true;
  o.labels = {"holds"};
  const Words w(s);
  const auto cosets = minimal_cosets(inst.group);
  for (const auto& f : r2.fragments) {
    const std::uint64_t x = f.word();
    const std::int64_t ext = n - pc(w.sum(x));
    if (pc(x) <= ext) {
      for (auto c : cosets)
        if ((c & x) == c) return fail(o, "proper_fragment_coset");
    }
    if (!f.contains(Element{0}) || f.size() < 3 || ext < 4) continue;
    if (!is_aperiodic(sumset(f, s))) return fail(o, "fragment_sum_aperiodic");
    if (!is_generating(f)) return fail(o, "fragment_generates");
    if (f.size() <= 4 && sz(f) + sz(s) > 6 &&
        ctx.ws.degeneracy(f).status == Degeneracy::kDegenerate)
      return fail(o, "small_fragment_non_degenerate");
  }
  if (n >= 5) {
    const auto& r3 = ctx.ws.kappa(s, 3);
    if (r3.separable) {
      for (const auto& a : r3.atoms) {
        if (a.size() < 4) continue;
        if (a.size() != 4) return fail(o, "three_atom_size");
        if (ctx.ws.kappa(a, 2).kappa != a.size()) return fail(o, "three_atom_kappa");
      }
    }
  }
  return o;
}

CheckOutcome check_three_set_atoms(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  const SubsetMask& s = inst.s;
  const std::int64_t n = inst.group.order();
  if (s.size() != 3 || n < 7 || !is_generating(s)) return o;
  const auto& r4 = ctx.ws.kappa(s, 4);
  const auto& r2 = ctx.ws.kappa(s, 2);
  if (!r4.separable || r4.kappa != 3 || r2.kappa != 3) return o;
  if (ctx.ws.degeneracy(s).status == Degeneracy::kDegenerate) return o;
  o.applicable = true;
  o.labels = {"holds"};
  for (const auto& a : r4.atoms) {
    if (a.size() != 4) return fail(o, "atom_size");
    if (ctx.ws.degeneracy(a).status == Degeneracy::kDegenerate) return fail(o, "atom_non_degenerate");
  }
  return o;
}

// ---- recognizer cross-check -----------------------------------------------

CheckOutcome essential(const PairInstance& inst, CheckContext& ctx) {
  CheckOutcome o;
  o.applicable = true;
  for (const auto& h : ctx.ws.subgroups(inst.group)) {
    const auto w = classify_essential_pair(inst.s, inst.t, ctx.ws.quotient(h));
    const int mine = w ? static_cast<int>(w->kind) : 0;
    const int direct = audit::essential_kind(inst.s, inst.t, h);
    if (mine != direct) return fail(o, "kind_mismatch");
    if (mine) o.labels.push_back(std::string("kind_") + to_string(w->kind));
  }
  return o;
}

std::vector<TheoremInfo> build_registry() {
  std::vector<TheoremInfo> r;
  auto add = [&](std::string id, Shape shape, std::uint32_t max_order, bool scan,
                 std::string summary, auto fn) {
    TheoremInfo t;
    t.id = std::move(id);
    t.shape = shape;
    t.default_max_order = max_order;
    t.per_instance_scan = scan;
    t.summary = std::move(summary);
    t.check = fn;
    r.push_back(std::move(t));
  };
  add("kneser", Shape::kPair, 10, false, "A+B aperiodic implies |A+B| >= |A|+|B|-1", kneser);
  add("cover", Shape::kPair, 12, false, "|A|+|B| > |G| implies A+B = G", check_cover);
  add("scherk", Shape::kPair, 10, false, "a unique representation implies |A+B| >= |A|+|B|-1",
      scherk);
  add("duality", Shape::kPair, 10, false,
      "X lies in (X^S)^-S with the same sumset; the size identity for aperiodic X+S", duality);
  add("one_atoms", Shape::kSingle, 16, true,
      "1-atoms are subgroups, 1-fragments are periodic by them, kappa_1 >= |S|/2", check_one_atoms);
  add("two_atoms", Shape::kSingle, 16, true, "2-atoms containing 0 are subgroups or have size 2", check_two_atoms);
  add("fragment_closure", Shape::kSingle, 12, true,
      "intersection and union of overlapping fragments are fragments", check_fragment_closure);
  add("atom_inside", Shape::kSingle, 12, true,
      "an atom meeting a fragment in k points lies inside it", check_atom_inside);
  add("negation", Shape::kSingle, 12, true,
      "-X and X^S are fragments of -S for every fragment X", check_negation);
  add("small_kappa2", Shape::kSingle, 14, true,
      "small kappa_2 and not a progression implies degenerate", check_small_kappa2);
  add("hyper_quotient", Shape::kSingle, 16, true,
      "the quotient by the hyper-atom is a progression or a Vosper set", check_hyper_quotient);
  add("near_pair", Shape::kPair, 14, false,
      "B is a near-progression with the difference of A", check_near_pair);
  add("remove_one", Shape::kPair, 10, false,
      "removing one element of a Vosper set or progression costs at most one", check_remove_one);
  add("matching", Shape::kPair, 12, false, "a (T,S,H)-matching of size min(u, t+1) exists", check_matching);
  add("arcs", Shape::kSingle, 12, true, "arc counts inside atoms", check_arcs);
  add("aperiodic_atoms", Shape::kSingle, 16, true,
      "fragments of non-degenerate sets with kappa_2 = |S|", check_aperiodic_atoms);
  add("three_set_atoms", Shape::kSingle, 16, true, "4-atoms of 3-sets have size 4 and are non-degenerate",
      check_three_set_atoms);
  add("essential", Shape::kPair, 8, false,
      "essential-pair recognizer agrees with a direct search for every subgroup", essential);

  auto cls = [&](TheoremId id, Shape shape, std::uint32_t max_order, std::string summary,
                 std::uint32_t s_min = 1) {
    add(to_string(id), shape, max_order, shape == Shape::kSingleMu, std::move(summary),
        [id](const PairInstance& inst, CheckContext& ctx) { return classifier_check(id, inst, ctx); });
    r.back().s_min = s_min;
  };
  cls(TheoremId::k3x3, Shape::kPair, 16, "two 3-sets with small sumset", 3);
  r.back().s_max = 3;
  r.back().t_min = 3;
  r.back().t_max = 3;
  cls(TheoremId::kTwoThird, Shape::kPair, 12, "degenerate S with |S+T| <= 2(|G|+mu)/3", 2);
  cls(TheoremId::kModular, Shape::kPair, 12, "quotient form of the degenerate case", 2);
  cls(TheoremId::kNear, Shape::kSingleMu, 14, "non-degenerate S is a near-progression", 3);
  cls(TheoremId::kN4, Shape::kPair, 12, "|S+T| <= |G| - 4 + 2mu", 2);
  cls(TheoremId::kN3, Shape::kPair, 12, "|S+T| <= |G| - 3 - mu", 2);
  cls(TheoremId::kKemperman, Shape::kPair, 12, "quasi-periodic partitions when |A+B| = |A|+|B|-1");
  cls(TheoremId::kGrynkiewicz, Shape::kPair, 12, "structure when |A+B| = |A|+|B|", 3);
  return r;
}

// ---- enumeration ----------------------------------------------------------

double choose(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::uint32_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

struct Bounds {
  std::uint32_t s_lo, s_hi, t_lo, t_hi;
};

Bounds bounds(const InstanceFilter& f, const TheoremInfo& info, std::uint32_t n) {
  Bounds b{std::max({1u, f.s_min, info.s_min}), std::min({n, f.s_max, info.s_max}),
           std::max({1u, f.t_min, info.t_min}), std::min({n, f.t_max, info.t_max})};
  return b;
}

double count_sets(std::uint32_t n, std::uint32_t lo, std::uint32_t hi) {
  double c = 0.0;
  for (std::uint32_t k = lo; k <= hi; ++k) c += choose(n - 1, k - 1);
  return c;
}

// Words of every set containing 0 with size in [lo, hi], by size then value.
std::vector<std::uint64_t> sets_with_zero(std::uint32_t n, std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint64_t> out;
  const std::uint32_t m = n - 1;
  for (std::uint32_t k = lo; k <= hi; ++k) {
    const std::uint32_t r = k - 1;
    if (r > m) break;
    if (r == 0) {
      out.push_back(1);
      continue;
    }
    std::uint64_t c = (r == 64) ? ~0ull : ((1ull << r) - 1);
    const std::uint64_t limit = 1ull << m;
    while (c < limit) {
      out.push_back((c << 1) | 1);
      const std::uint64_t lowest = c & -c;
      const std::uint64_t ripple = c + lowest;
      c = (((ripple ^ c) >> 2) / lowest) | ripple;
    }
  }
  return out;
}

SubsetMask random_set(const GroupSpec& g, std::uint32_t lo, std::uint32_t hi, std::mt19937_64& rng) {
  const std::uint32_t n = g.order();
  std::uniform_int_distribution<std::uint32_t> size_d(lo, hi);
  const std::uint32_t k = size_d(rng);
  std::vector<std::uint32_t> rest(n - 1);
  for (std::uint32_t i = 0; i + 1 < n; ++i) rest[i] = i + 1;
  for (std::uint32_t i = 0; i + 1 < k; ++i) {
    std::uniform_int_distribution<std::uint32_t> pick(i, n - 2);
    std::swap(rest[i], rest[pick(rng)]);
  }
  SubsetMask s(g);
  s.insert(Element{0});
  for (std::uint32_t i = 0; i + 1 < k; ++i) s.insert(Element{rest[i]});
  return s;
}

struct Item {
  std::uint32_t group = 0;
  std::uint64_t s = 0;
  std::int64_t random_index = -1;
};

struct Plan {
  const TheoremInfo* info = nullptr;
  std::vector<GroupSpec> groups;
  std::vector<std::vector<std::uint64_t>> t_sets;
  std::vector<Item> items;
  std::vector<PairInstance> random;
};

Plan make_plan(const InstanceFilter& f, const TheoremInfo& info) {
  Plan p;
  p.info = &info;
  for (const auto& factors : filter_groups(f, info)) p.groups.push_back(make_group(factors));
  if (f.sampling == Sampling::kExhaustive) {
    const double est = estimate_cost(f, info);
    if (est > f.budget) {
      std::ostringstream msg;
      msg << "exhaustive sweep of " << info.id << " needs about " << est
          << " sumset evaluations, above the budget " << f.budget
          << "; use random sampling or raise the budget";
      throw Error(msg.str());
    }
    for (std::uint32_t gi = 0; gi < p.groups.size(); ++gi) {
      const std::uint32_t n = p.groups[gi].order();
      if (n > 63) throw Error("exhaustive sweeps need groups of order at most 63");
      const Bounds b = bounds(f, info, n);
      p.t_sets.push_back(info.shape == Shape::kPair ? sets_with_zero(n, b.t_lo, b.t_hi)
                                                    : std::vector<std::uint64_t>{});
      if (b.s_lo > b.s_hi) continue;
      for (auto s : sets_with_zero(n, b.s_lo, b.s_hi)) p.items.push_back({gi, s, -1});
    }
    return p;
  }
  std::mt19937_64 rng(f.seed);
  std::vector<std::uint32_t> usable;
  for (std::uint32_t gi = 0; gi < p.groups.size(); ++gi) {
    const Bounds b = bounds(f, info, p.groups[gi].order());
    if (b.s_lo <= b.s_hi && (info.shape != Shape::kPair || b.t_lo <= b.t_hi)) usable.push_back(gi);
  }
  if (usable.empty()) return p;
  std::uniform_int_distribution<std::size_t> pick(0, usable.size() - 1);
  for (std::uint64_t i = 0; i < f.count; ++i) {
    const std::uint32_t gi = usable[pick(rng)];
    const GroupSpec& g = p.groups[gi];
    const Bounds b = bounds(f, info, g.order());
    PairInstance inst{g, random_set(g, b.s_lo, b.s_hi, rng), SubsetMask(g), 0};
    if (info.shape == Shape::kPair) {
      inst.t = random_set(g, b.t_lo, b.t_hi, rng);
      inst.mu = sumset_defect(inst.s, inst.t);
    } else if (info.shape == Shape::kSingleMu) {
      inst.mu = f.mu ? *f.mu : static_cast<int>(rng() & 1u);
    }
    p.random.push_back(std::move(inst));
    p.items.push_back({gi, 0, static_cast<std::int64_t>(i)});
  }
  return p;
}

template <class F>
void expand(const Plan& p, const InstanceFilter& f, const Item& item, F&& fn) {
  if (item.random_index >= 0) {
    const PairInstance& inst = p.random[static_cast<std::size_t>(item.random_index)];
    if (p.info->shape == Shape::kPair && f.mu && *f.mu != inst.mu) return;
    fn(inst);
    return;
  }
  const GroupSpec& g = p.groups[item.group];
  PairInstance inst{g, SubsetMask::from_word(g, item.s), SubsetMask(g), 0};
  switch (p.info->shape) {
    case Shape::kSingle:
      fn(inst);
      break;
    case Shape::kSingleMu:
      for (int mu = 0; mu <= 1; ++mu) {
        if (f.mu && *f.mu != mu) continue;
        inst.mu = mu;
        fn(inst);
      }
      break;
    case Shape::kPair:
      for (auto t : p.t_sets[item.group]) {
        inst.t = SubsetMask::from_word(g, t);
        inst.mu = sumset_defect(inst.s, inst.t);
        if (f.mu && *f.mu != inst.mu) continue;
        fn(inst);
      }
      break;
  }
}

struct Partial {
  std::uint64_t instances = 0;
  std::uint64_t applicable = 0;
  std::uint64_t violation_count = 0;
  std::vector<Counterexample> violations;
  std::map<std::string, std::uint64_t> tally;
  std::map<std::string, PairInstance> examples;
};

std::string clause_key(const std::string& clause) { return clause.substr(0, clause.find(" (")); }

std::string instance_key(const std::string& theorem, const PairInstance& p) {
  std::ostringstream os;
  os << theorem << '|' << p.group.to_string() << '|' << p.s.to_hex() << '|' << p.t.to_hex() << '|'
     << p.mu;
  return os.str();
}

}  // namespace

int sumset_defect(const SubsetMask& s, const SubsetMask& t) {
  return static_cast<int>(sz(s) + sz(t) - sz(sumset(s, t)));
}

const std::vector<TheoremInfo>& theorem_registry() {
  static const std::vector<TheoremInfo> r = build_registry();
  return r;
}

const TheoremInfo& theorem_info(const std::string& id) {
  for (const auto& t : theorem_registry())
    if (t.id == id) return t;
  throw Error("unknown theorem: " + id);
}

std::vector<std::vector<std::uint32_t>> filter_groups(const InstanceFilter& f,
                                                      const TheoremInfo& info) {
  if (!f.groups.empty()) return f.groups;
  const std::uint32_t hi = f.max_order ? f.max_order : info.default_max_order;
  return abelian_groups_up_to(hi, std::max(2u, f.min_order));
}

double estimate_cost(const InstanceFilter& f, const TheoremInfo& info) {
  double total = 0.0;
  for (const auto& factors : filter_groups(f, info)) {
    std::uint32_t n = 1;
    for (auto d : factors) n *= d;
    const Bounds b = bounds(f, info, n);
    double per = 1.0;
    if (info.per_instance_scan) per = std::ldexp(1.0, static_cast<int>(n) - 1);
    if (f.sampling == Sampling::kRandom) {
      total = std::max(total, per);
      continue;
    }
    double c = b.s_lo <= b.s_hi ? count_sets(n, b.s_lo, b.s_hi) : 0.0;
    if (info.shape == Shape::kPair) c *= b.t_lo <= b.t_hi ? count_sets(n, b.t_lo, b.t_hi) : 0.0;
    if (info.shape == Shape::kSingleMu) c *= 2.0;
    total += c * per;
  }
  if (f.sampling == Sampling::kRandom) total *= static_cast<double>(f.count);
  return total;
}

std::vector<PairInstance> enumerate_instances(const InstanceFilter& f, const std::string& theorem) {
  const TheoremInfo& info = theorem_info(theorem);
  const Plan p = make_plan(f, info);
  std::vector<PairInstance> out;
  for (const auto& item : p.items) expand(p, f, item, [&](const PairInstance& i) { out.push_back(i); });
  return out;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SMALLSUM_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

VerificationReport verify_theorem(const std::string& theorem, const InstanceFilter& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const TheoremInfo& info = theorem_info(theorem);
  const Plan plan = make_plan(f, info);

  VerificationReport rep;
  rep.theorem = theorem;
  rep.sampling = f.sampling;
  rep.kappa_mode = f.kappa.mode;
  rep.seed = f.seed;
  rep.estimate = estimate_cost(f, info);
  for (const auto& g : plan.groups) rep.groups.push_back(g.factors());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(resolve_workers(f.workers),
                                      static_cast<unsigned>(std::max<std::size_t>(1, plan.items.size()))));
  rep.workers = workers;

  std::vector<Partial> parts(plan.items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&]() {
    CheckContext ctx(f.kappa);
    try {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= plan.items.size()) break;
        ctx.ws.clear();
        ctx.vosper.clear();
        Partial& part = parts[i];
        expand(plan, f, plan.items[i], [&](const PairInstance& inst) {
          ++part.instances;
          const CheckOutcome o = info.check(inst, ctx);
          if (!o.applicable) return;
          ++part.applicable;
          for (const auto& l : o.labels) {
            ++part.tally[l];
            part.examples.emplace(l, inst);
          }
          if (!o.principal.empty()) ++part.tally["principal:" + o.principal];
          if (o.failure) {
            ++part.violation_count;
            if (part.violations.size() < f.max_violations)
              part.violations.push_back({theorem, inst, *o.failure, false});
          }
        });
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = plan.items.size();
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  for (auto& part : parts) {
    rep.instances += part.instances;
    rep.applicable += part.applicable;
    rep.violation_count += part.violation_count;
    for (auto& v : part.violations)
      if (rep.violations.size() < f.max_violations) rep.violations.push_back(std::move(v));
    for (const auto& [k, v] : part.tally) rep.tally[k] += v;
    for (auto& [k, v] : part.examples) rep.examples.emplace(k, std::move(v));
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::optional<std::string> reproduce(const std::string& theorem, const PairInstance& inst,
                                     const KappaOptions& options) {
  const TheoremInfo& info = theorem_info(theorem);
  CheckContext ctx(options);
  const CheckOutcome o = info.check(inst, ctx);
  if (!o.applicable) return std::nullopt;
  return o.failure;
}

namespace {

PairInstance rebuild(const TheoremInfo& info, const GroupSpec& g, const SubsetMask& s,
                     const SubsetMask& t, int mu) {
  PairInstance p{g, normalize(s).first, SubsetMask(g), mu};
  if (info.shape == Shape::kPair) {
    p.t = normalize(t).first;
    p.mu = sumset_defect(p.s, p.t);
  }
  return p;
}

// Smaller groups carrying the instance: images in quotients and, when both
// sets fit, the subgroup they live in. Smallest order first.
std::vector<PairInstance> group_shrinks(const TheoremInfo& info, const PairInstance& inst) {
  std::vector<PairInstance> out;
  const GroupSpec& g = inst.group;
  const bool pair = info.shape == Shape::kPair;
  for (const auto& h : *cached_subgroups(g)) {
    if (h.is_trivial()) continue;
    if (!h.is_whole()) {
      const Morphism phi = quotient(g, h);
      out.push_back(rebuild(info, phi.target, phi.image(inst.s),
                            pair ? phi.image(inst.t) : SubsetMask(phi.target), inst.mu));
    }
    const bool fits = inst.s.is_subset_of(h.members) && (!pair || inst.t.is_subset_of(h.members));
    if (!h.is_whole() && fits) {
      const Embedding e = restrict_to(g, h);
      out.push_back(rebuild(info, e.group, e.pull_back(inst.s),
                            pair ? e.pull_back(inst.t) : SubsetMask(e.group), inst.mu));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PairInstance& a, const PairInstance& b) {
    return a.group.order() < b.group.order();
  });
  return out;
}

}  // namespace

Counterexample minimize(const Counterexample& c, const KappaOptions& options) {
  const TheoremInfo& info = theorem_info(c.theorem);
  const auto first = reproduce(c.theorem, c.instance, options);
  if (!first) throw Error("minimize: the instance does not fail " + c.theorem);
  const std::string key = clause_key(*first);
  std::string clause = *first;
  auto fails = [&](const PairInstance& p) {
    std::optional<std::string> r;
    try {
      r = reproduce(c.theorem, p, options);
    } catch (const Error&) {
      return false;
    }
    if (r && clause_key(*r) == key) {
      clause = *r;
      return true;
    }
    return false;
  };

  PairInstance cur = c.instance;
  const bool pair = info.shape == Shape::kPair;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& cand : group_shrinks(info, cur)) {
      if (fails(cand)) {
        cur = cand;
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (int side = 0; side < (pair ? 2 : 1) && !changed; ++side) {
      const SubsetMask& x = side == 0 ? cur.s : cur.t;
      if (x.size() <= 1) continue;
      for (auto e : x.elements()) {
        SubsetMask smaller = x;
        smaller.erase(e);
        const PairInstance cand = side == 0 ? rebuild(info, cur.group, smaller, cur.t, cur.mu)
                                            : rebuild(info, cur.group, cur.s, smaller, cur.mu);
        if (fails(cand)) {
          cur = cand;
          changed = true;
          break;
        }
      }
    }
  }
  fails(cur);
  return {c.theorem, cur, clause, true};
}

std::vector<Counterexample> minimize_all(const std::vector<Counterexample>& cs,
                                         const KappaOptions& options) {
  std::vector<Counterexample> out;
  std::set<std::string> seen;
  for (const auto& c : cs) {
    Counterexample m = minimize(c, options);
    if (seen.insert(instance_key(m.theorem, m.instance)).second) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace smallsum
