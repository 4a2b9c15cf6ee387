#include "smallsum/audit.hpp"

#include <algorithm>
#include <set>

#include "smallsum/setops.hpp"

namespace smallsum::audit {

namespace {

using Set = std::set<std::uint32_t>;

Set to_set(const SubsetMask& m) {
  const auto idx = m.indices();
  return Set(idx.begin(), idx.end());
}

Set all_of(const GroupSpec& g) {
  Set out;
  for (std::uint32_t i = 0; i < g.order(); ++i) out.insert(i);
  return out;
}

std::uint32_t add(const GroupSpec& g, std::uint32_t a, std::uint32_t b) {
  return g.add(Element{a}, Element{b}).idx;
}
std::uint32_t neg(const GroupSpec& g, std::uint32_t a) { return g.neg(Element{a}).idx; }
std::uint32_t sub(const GroupSpec& g, std::uint32_t a, std::uint32_t b) {
  return add(g, a, neg(g, b));
}

Set plus(const GroupSpec& g, const Set& a, const Set& b) {
  Set out;
  for (auto x : a)
    for (auto y : b) out.insert(add(g, x, y));
  return out;
}

Set shift(const GroupSpec& g, const Set& a, std::uint32_t x) {
  Set out;
  for (auto y : a) out.insert(add(g, y, x));
  return out;
}

Set minus_set(const GroupSpec& g, const Set& a) {
  Set out;
  for (auto y : a) out.insert(neg(g, y));
  return out;
}

Set difference(const Set& a, const Set& b) {
  Set out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool subset_of(const Set& a, const Set& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::uint32_t order_of(const GroupSpec& g, std::uint32_t r) {
  std::uint32_t k = 1;
  std::uint32_t x = r;
  while (x != 0) {
    x = add(g, x, r);
    ++k;
  }
  return k;
}

bool periodic(const GroupSpec& g, const Set& x, const Set& h) { return plus(g, x, h) == x; }

// Obtained from an H-periodic set by deleting nu elements.
bool minus_periodic(const GroupSpec& g, const Set& x, const Set& h, std::uint32_t nu) {
  const Set hull = plus(g, x, h);
  for (std::uint32_t extra = 0; hull.size() + extra * h.size() <= g.order(); ++extra)
    if (hull.size() + extra * h.size() == x.size() + nu) return true;
  return false;
}

// A set A is an (r,-j)-progression when it sits inside {x, x+r, ...} of
// |A| + j distinct elements for some x.
bool is_prog(const GroupSpec& g, const Set& a, std::uint32_t r, unsigned j) {
  if (a.size() == 1) return true;
  if (a.empty() || r == 0) return false;
  const std::size_t len = a.size() + j;
  if (order_of(g, r) < len) return false;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    Set p;
    std::uint32_t e = x;
    for (std::size_t i = 0; i < len; ++i) {
      p.insert(e);
      e = add(g, e, r);
    }
    if (subset_of(a, p)) return true;
  }
  return false;
}

bool some_prog(const GroupSpec& g, const Set& a, unsigned j) {
  for (std::uint32_t r = 1; r < g.order(); ++r)
    if (is_prog(g, a, r, j)) return true;
  return a.size() == 1;
}

bool common_prog(const GroupSpec& g, const Set& a, const Set& b, unsigned j) {
  if (a.size() == 1) return some_prog(g, b, j);
  if (b.size() == 1) return some_prog(g, a, j);
  for (std::uint32_t r = 1; r < g.order(); ++r)
    if (is_prog(g, a, r, j) && is_prog(g, b, r, j)) return true;
  return false;
}

bool witness_rebuilds(const GroupSpec& g, const ProgressionWitness& w, const Set& a,
                      unsigned j) {
  if (w.wildcard) return a.size() == 1;
  if (w.deleted.size() != j) return false;
  if (w.length > order_of(g, w.difference.idx)) return false;
  Set p;
  std::uint32_t e = w.start.idx;
  for (std::uint32_t i = 0; i < w.length; ++i) {
    p.insert(e);
    e = add(g, e, w.difference.idx);
  }
  if (p.size() != w.length) return false;
  for (auto d : w.deleted) {
    if (!p.count(d.idx)) return false;
    p.erase(d.idx);
  }
  return p == a;
}

// ---- cosets ---------------------------------------------------------------

struct Cosets {
  const GroupSpec& g;
  Set h;

  std::uint32_t key(std::uint32_t x) const { return *shift(g, h, x).begin(); }
  Set image(const Set& a) const {
    Set out;
    for (auto x : a) out.insert(key(x));
    return out;
  }
  Set part(const Set& a, std::uint32_t k) const {
    Set out;
    for (auto x : a)
      if (key(x) == k) out.insert(x);
    return out;
  }
};

struct Ordering {
  std::vector<std::uint32_t> keys;
  bool wildcard = false;
  std::uint32_t d = 0;  // coset key of the difference
};

std::vector<Ordering> orderings(const Cosets& c, const Set& a) {
  const Set img = c.image(a);
  std::vector<Ordering> out;
  if (img.size() == 1) {
    out.push_back({{*img.begin()}, true, 0});
    return out;
  }
  const std::uint32_t zero_key = c.key(0);
  std::set<std::uint32_t> diffs;
  for (std::uint32_t x = 0; x < c.g.order(); ++x) diffs.insert(c.key(x));
  for (auto d : diffs) {
    if (d == zero_key) continue;
    for (auto st : img) {
      std::vector<std::uint32_t> seq;
      std::uint32_t e = st;
      for (std::size_t i = 0; i < img.size(); ++i) {
        seq.push_back(c.key(e));
        e = add(c.g, e, d);
      }
      if (Set(seq.begin(), seq.end()) == img) out.push_back({seq, false, d});
    }
  }
  return out;
}

bool same_diff(const Ordering& a, const Ordering& b) {
  return a.wildcard || b.wildcard || a.d == b.d;
}

bool quotient_equality(const Cosets& c, const Set& s, const Set& t) {
  return c.image(plus(c.g, s, t)).size() + 1 == c.image(s).size() + c.image(t).size();
}

bool quotient_common_prog(const Cosets& c, const Set& s, const Set& t) {
  for (const auto& a : orderings(c, s))
    for (const auto& b : orderings(c, t))
      if (same_diff(a, b)) return true;
  return false;
}

std::uint32_t min_of(const std::vector<std::size_t>& v) {
  return static_cast<std::uint32_t>(*std::min_element(v.begin(), v.end()));
}

bool needs_common(const Cosets& c, const Set& s, const Set& t) {
  const std::size_t q = c.g.order() / c.h.size();
  const std::size_t pst = c.image(plus(c.g, s, t)).size();
  return min_of({c.image(s).size(), c.image(t).size(), q - pst}) >= 2;
}

// Periodic-ends condition for chosen last parts.
bool ends_hold(const Cosets& c, const Set& s, const Set& s_last, const Set& t,
               const Set& t_last, int mu, std::uint32_t nu, const std::string& side) {
  if (static_cast<int>(nu) + mu > 1) return false;
  const Set s_rest = difference(s, s_last);
  const Set t_rest = difference(t, t_last);
  const Set& per = side == "S" ? s_rest : t_rest;
  const Set& other = side == "S" ? t_rest : s_rest;
  if (!periodic(c.g, per, c.h) || !minus_periodic(c.g, other, c.h, nu)) return false;
  const std::int64_t lhs = plus(c.g, t_last, s_last).size();
  return lhs == static_cast<std::int64_t>(t_last.size() + s_last.size()) - nu - mu;
}

bool any_ends(const Cosets& c, const Set& s, const Set& s_last, const Set& t, const Set& t_last,
              int mu) {
  for (std::uint32_t nu = 0; static_cast<int>(nu) + mu <= 1; ++nu)
    for (const char* side : {"S", "T"})
      if (ends_hold(c, s, s_last, t, t_last, mu, nu, side)) return true;
  return false;
}

// Checks that `d` lists the H-decomposition of `a` (as an H-progression when
// asked) and returns the coset key of its difference through `diff`.
bool decomposition_ok(const Cosets& c, const HDecomposition& d, const Set& a, bool progression,
                      std::uint32_t& diff, bool& wildcard) {
  Set all;
  std::set<std::uint32_t> keys;
  for (const auto& p : d.parts) {
    const Set part = to_set(p);
    if (part.empty()) return false;
    const Set img = c.image(part);
    if (img.size() != 1) return false;
    if (!keys.insert(*img.begin()).second) return false;
    if (c.part(a, *img.begin()) != part) return false;
    all.insert(part.begin(), part.end());
  }
  if (all != a) return false;
  wildcard = d.parts.size() == 1;
  if (!progression || wildcard) return true;
  const GroupSpec& g = c.g;
  std::vector<std::uint32_t> reps;
  for (const auto& p : d.parts) reps.push_back(*to_set(p).begin());
  diff = c.key(sub(g, reps[1], reps[0]));
  for (std::size_t i = 1; i < reps.size(); ++i)
    if (c.key(sub(g, reps[i], reps[i - 1])) != diff) return false;
  return true;
}

bool kind_holds(int kind, const Cosets& c, const Set& s, const Set& t, const Ordering& os,
                const Ordering& ot) {
  const GroupSpec& g = c.g;
  const std::size_t u = os.keys.size() - 1;
  const std::size_t tt = ot.keys.size() - 1;
  const Set s0 = c.part(s, os.keys.front());
  const Set su = c.part(s, os.keys.back());
  const Set t0 = c.part(t, ot.keys.front());
  const Set tl = c.part(t, ot.keys.back());
  const std::size_t h = c.h.size();
  if (kind == 1) {
    return h == 2 && s0.size() == 1 && su.size() == 1 && t0.size() == 1 && tl.size() == 1;
  }
  if (kind == 2) {
    if (u < 1 || tt < 1) return false;
    const Set sp = c.part(s, os.keys[u - 1]);
    const Set tp = c.part(t, ot.keys[tt - 1]);
    return su.size() == 1 && tl.size() == 1 && sp.size() == h - 1 && tp.size() == h - 1 &&
           plus(g, tp, su) == plus(g, tl, sp);
  }
  // kind 3: S_0, T_0 translates of {0,k0}; S_u, T_t translates of {0,k1};
  // H = {0, k0, k1, k0 + k1} with k0 != k1 of order 2.
  auto gap = [&](const Set& x) -> std::int64_t {
    if (x.size() != 2) return -1;
    const std::uint32_t k = sub(g, *x.rbegin(), *x.begin());
    if (add(g, k, k) != 0) return -1;
    return k;
  };
  const auto k0 = gap(s0);
  const auto k1 = gap(su);
  if (k0 <= 0 || k1 <= 0 || k0 == k1) return false;
  if (gap(t0) != k0 || gap(tl) != k1) return false;
  const Set klein = {0, static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k1),
                     add(g, static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k1))};
  return klein == c.h;
}

int essential_kind_sets(const Cosets& c, const Set& s, const Set& t, int only_kind) {
  if (s.empty() || t.empty()) return 0;
  const std::size_t h = c.h.size();
  if (plus(c.g, s, c.h).size() - s.size() != h) return 0;
  if (plus(c.g, t, c.h).size() - t.size() != h) return 0;
  const auto so = orderings(c, s);
  const auto to = orderings(c, t);
  for (int kind = 1; kind <= 3; ++kind) {
    if (only_kind && kind != only_kind) continue;
    for (const auto& a : so)
      for (const auto& b : to)
        if (same_diff(a, b) && kind_holds(kind, c, s, t, a, b)) return kind;
  }
  return 0;
}

bool translate_or_complement(const GroupSpec& g, const Set& s, const Set& t,
                             const std::string& branch, std::optional<Element> a) {
  if (!a) return false;
  if (branch == "translate") return shift(g, s, a->idx) == t;
  if (branch == "complement") {
    // G \ (-a - 2S)
    const Set target = difference(all_of(g), shift(g, minus_set(g, plus(g, s, s)), neg(g, a->idx)));
    return target == t;
  }
  return false;
}

bool exists_translate_or_complement(const GroupSpec& g, const Set& s, const Set& t) {
  for (std::uint32_t a = 0; a < g.order(); ++a) {
    if (translate_or_complement(g, s, t, "translate", Element{a})) return true;
    if (translate_or_complement(g, s, t, "complement", Element{a})) return true;
  }
  return false;
}

bool partitions_ok(const Cosets& c, const QuasiPeriodicPartition& p, const Set& a) {
  const Set a0 = to_set(p.a0);
  const Set a1 = to_set(p.a1);
  Set all = a0;
  all.insert(a1.begin(), a1.end());
  if (all != a || all.size() != a0.size() + a1.size()) return false;
  if (!periodic(c.g, a0, c.h)) return false;
  return !a1.empty() && c.image(a1).size() == 1;
}

bool kemperman_ok(const Cosets& c, const CaseWitness& w, const Set& a, const Set& b) {
  if (!w.a_part || !w.b_part) return false;
  if (!partitions_ok(c, *w.a_part, a) || !partitions_ok(c, *w.b_part, b)) return false;
  const Set a1 = to_set(w.a_part->a1);
  const Set b1 = to_set(w.b_part->a1);
  if (plus(c.g, b1, a1).size() + 1 != a1.size() + b1.size()) return false;
  if (!quotient_equality(c, a, b)) return false;
  const Set probe = c.image(plus(c.g, plus(c.g, a1, b1), minus_set(c.g, a)));
  const Set pb = c.image(b);
  std::size_t common = 0;
  for (auto k : probe) common += pb.count(k);
  return common == 1;
}

bool role_ok(const GroupSpec& g, const std::string& role) {
  if (g.order() == 12) return true;
  return role == "super_atom_S" || role == "super_atom_TS";
}

AuditResult fail(const std::string& why) { return {false, why}; }

}  // namespace

std::uint32_t brute_kappa(const SubsetMask& s, unsigned k) {
  const GroupSpec& g = s.group();
  const std::uint32_t n = g.order();
  if (n > 20) throw Error("brute_kappa: order too large");
  const Set sv = to_set(s);
  std::uint32_t best = n - 2 * k + 1;
  bool found = false;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    Set x;
    for (std::uint32_t i = 0; i < n; ++i)
      if ((m >> i) & 1u) x.insert(i);
    if (x.size() < k) continue;
    const Set xs = plus(g, x, sv);
    if (n - xs.size() < k) continue;
    const std::uint32_t b = static_cast<std::uint32_t>(xs.size() - x.size());
    if (!found || b < best) best = b;
    found = true;
  }
  return best;
}

int essential_kind(const SubsetMask& s, const SubsetMask& t, const Subgroup& h, int only_kind) {
  const Cosets c{s.group(), to_set(h.members)};
  return essential_kind_sets(c, to_set(s), to_set(t), only_kind);
}

std::vector<std::string> n3_cases(const PairInstance& inst,
                                  const std::vector<std::pair<Subgroup, std::string>>& candidates) {
  const GroupSpec& g = inst.group;
  const Set s = to_set(inst.s);
  const Set t = to_set(inst.t);
  const int mu = inst.mu;
  std::vector<std::string> out;
  if (mu == 0 && s.size() == 3 && exists_translate_or_complement(g, s, t)) out.push_back("i");
  if (common_prog(g, s, t, static_cast<unsigned>(1 - mu))) out.push_back("ii");
  if (mu == 0) {
    for (const auto& [h, role] : candidates) {
      if (essential_kind_sets(Cosets{g, to_set(h.members)}, s, t, 0) > 0) {
        out.push_back("iii");
        break;
      }
    }
  }
  for (const auto& [h, role] : candidates) {
    const Cosets c{g, to_set(h.members)};
    if (!quotient_equality(c, s, t)) continue;
    bool hit = false;
    if (needs_common(c, s, t)) {
      for (const auto& a : orderings(c, s)) {
        for (const auto& b : orderings(c, t)) {
          if (!same_diff(a, b)) continue;
          if (any_ends(c, s, c.part(s, a.keys.back()), t, c.part(t, b.keys.back()), mu)) {
            hit = true;
            break;
          }
        }
        if (hit) break;
      }
    } else {
      for (auto ks : c.image(s)) {
        for (auto kt : c.image(t)) {
          if (any_ends(c, s, c.part(s, ks), t, c.part(t, kt), mu)) {
            hit = true;
            break;
          }
        }
        if (hit) break;
      }
    }
    if (hit) {
      out.push_back("iv");
      break;
    }
  }
  return out;
}

AuditResult audit_verdict(const StructureVerdict& v, Workspace& ws) {
  const PairInstance& inst = v.instance;
  const GroupSpec& g = inst.group;
  const Set s = to_set(inst.s);
  const Set t = to_set(inst.t);
  const int mu = inst.mu;
  const unsigned j = static_cast<unsigned>(1 - mu);
  if (v.cases.empty()) return fail("no case reported");

  for (const auto& w : v.cases) {
    const std::string where = w.label + ":";
    switch (v.theorem) {
      case TheoremId::k3x3:
        if (w.label == "progression") {
          const bool sp = w.s_prog && witness_rebuilds(g, *w.s_prog, s, 0);
          const bool tp = w.t_prog && witness_rebuilds(g, *w.t_prog, t, 0);
          if (!sp && !tp) return fail(where + "progression witness");
        } else if (w.label == "translate") {
          if (!translate_or_complement(g, s, t, "translate", w.a)) return fail(where + "translate");
        } else {
          return fail("unknown case " + w.label);
        }
        break;

      case TheoremId::kTwoThird:
      case TheoremId::kModular: {
        if (w.label == "i") {
          if (mu != 0 || g.order() != 12 || s.size() != 4 || t.size() != 4)
            return fail(where + "sizes");
          if (brute_kappa(normalize(inst.t).first, 2) != 3) return fail(where + "kappa2");
          break;
        }
        if (!w.h) return fail(where + "missing subgroup");
        const Cosets c{g, to_set(w.h->members)};
        if (v.theorem == TheoremId::kModular) {
          if (w.label != "ii") return fail("unknown case " + w.label);
          if (!quotient_equality(c, s, t)) return fail(where + "quotient equality");
          if (!quotient_common_prog(c, s, t)) return fail(where + "quotient progressions");
          break;
        }
        if (w.label == "ii") {
          if (mu != 0 || !w.essential) return fail(where + "essential witness");
          const int kind = essential_kind_sets(c, s, t, 0);
          if (kind == 0 || kind != static_cast<int>(w.essential->kind))
            return fail(where + "essential kind");
        } else if (w.label == "iii") {
          if (!w.s_decomp || !w.t_decomp || !w.nu) return fail(where + "decompositions");
          std::uint32_t ds = 0, dt = 0;
          bool ws_ = false, wt = false;
          if (!decomposition_ok(c, *w.s_decomp, s, true, ds, ws_) ||
              !decomposition_ok(c, *w.t_decomp, t, true, dt, wt))
            return fail(where + "H-progressions");
          if (!ws_ && !wt && ds != dt) return fail(where + "common difference");
          if (!ends_hold(c, s, to_set(w.s_decomp->parts.back()), t,
                         to_set(w.t_decomp->parts.back()), mu, *w.nu, w.periodic_side))
            return fail(where + "periodic ends");
          if (plus(g, t, c.h).size() - t.size() + mu > c.h.size()) return fail(where + "excess");
        } else {
          return fail("unknown case " + w.label);
        }
        break;
      }

      case TheoremId::kNear:
        if (w.label != "progression" || !w.s_prog || !witness_rebuilds(g, *w.s_prog, s, j))
          return fail(where + "progression witness");
        break;

      case TheoremId::kN4:
      case TheoremId::kN3: {
        const bool n3 = v.theorem == TheoremId::kN3;
        if (n3 && w.label == "i") {
          if (mu != 0 || s.size() != 3 || !translate_or_complement(g, s, t, w.branch, w.a))
            return fail(where + "translate/complement");
        } else if ((n3 && w.label == "ii") || (!n3 && w.label == "i")) {
          if (!w.s_prog || !w.t_prog || !witness_rebuilds(g, *w.s_prog, s, j) ||
              !witness_rebuilds(g, *w.t_prog, t, j))
            return fail(where + "progression witnesses");
          if (!w.s_prog->wildcard && !w.t_prog->wildcard &&
              w.s_prog->difference != w.t_prog->difference &&
              w.s_prog->difference != g.neg(w.t_prog->difference))
            return fail(where + "common difference");
        } else if (n3 && w.label == "iii") {
          if (mu != 0 || !w.h || !w.essential) return fail(where + "essential witness");
          if (!role_ok(g, w.h_role)) return fail(where + "subgroup role");
          const Cosets c{g, to_set(w.h->members)};
          const int kind = essential_kind_sets(c, s, t, 0);
          if (kind == 0 || kind != static_cast<int>(w.essential->kind))
            return fail(where + "essential kind");
        } else if ((n3 && w.label == "iv") || (!n3 && w.label == "ii")) {
          if (!w.h) return fail(where + "missing subgroup");
          if (!role_ok(g, w.h_role)) return fail(where + "subgroup role");
          const Cosets c{g, to_set(w.h->members)};
          if (!quotient_equality(c, s, t)) return fail(where + "quotient equality");
          const bool common = needs_common(c, s, t);
          if (!n3) {
            if (common && !quotient_common_prog(c, s, t)) return fail(where + "quotient progressions");
            break;
          }
          if (!w.s_decomp || !w.t_decomp || !w.nu) return fail(where + "decompositions");
          std::uint32_t ds = 0, dt = 0;
          bool ws_ = false, wt = false;
          if (!decomposition_ok(c, *w.s_decomp, s, common, ds, ws_) ||
              !decomposition_ok(c, *w.t_decomp, t, common, dt, wt))
            return fail(where + "decompositions");
          if (common && !ws_ && !wt && ds != dt) return fail(where + "common difference");
          if (!ends_hold(c, s, to_set(w.s_decomp->parts.back()), t,
                         to_set(w.t_decomp->parts.back()), mu, *w.nu, w.periodic_side))
            return fail(where + "periodic ends");
        } else {
          return fail("unknown case " + w.label);
        }
        break;
      }

      case TheoremId::kKemperman:
      case TheoremId::kGrynkiewicz: {
        const bool kemp = v.theorem == TheoremId::kKemperman;
        if ((kemp && w.label == "partition") || (!kemp && w.label == "3")) {
          if (!w.h || (kemp && w.h->is_whole())) return fail(where + "subgroup");
          if (!kemperman_ok(Cosets{g, to_set(w.h->members)}, w, s, t))
            return fail(where + "partitions");
        } else if (!kemp && w.label == "1") {
          if (s.size() != 3 || !translate_or_complement(g, s, t, w.branch, w.a))
            return fail(where + "translate/complement");
        } else if (!kemp && w.label == "2") {
          if (!w.a || !w.b) return fail(where + "augmenting elements");
          Set a2 = s, b2 = t;
          a2.insert(w.a->idx);
          b2.insert(w.b->idx);
          if (plus(g, a2, b2).size() + 1 != a2.size() + b2.size()) return fail(where + "equality");
        } else if (!kemp && w.label == "4") {
          if (!w.h || w.h->order() != 4) return fail(where + "subgroup");
          if (essential_kind_sets(Cosets{g, to_set(w.h->members)}, s, t, 3) != 3)
            return fail(where + "klein pair");
        } else {
          return fail("unknown case " + w.label);
        }
        break;
      }
    }
  }

  if (v.theorem == TheoremId::kN3) {
    std::vector<std::string> mine;
    for (const auto& w : v.cases) mine.push_back(w.label);
    const auto theirs = n3_cases(inst, super_atom_candidates(inst.s, inst.t, ws));
    if (mine != theirs) {
      std::string a, b;
      for (const auto& x : mine) a += x + " ";
      for (const auto& x : theirs) b += x + " ";
      return fail("case list differs from direct search (" + a + "vs " + b + ")");
    }
  }
  return {};
}

}  // namespace smallsum::audit
