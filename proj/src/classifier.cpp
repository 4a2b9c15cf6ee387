#include "smallsum/classifier.hpp"

#include <algorithm>

#include "smallsum/audit.hpp"
#include "smallsum/mutation.hpp"
#include "smallsum/setops.hpp"

namespace smallsum {

namespace {

using mutation::check;

std::int64_t sz(const SubsetMask& x) { return static_cast<std::int64_t>(x.size()); }

bool generates_with(const SubsetMask& s, const SubsetMask& t) {
  const SubsetMask seeds = normalize(s).first | normalize(t).first;
  return subgroup_generated(s.group(), seeds).is_whole();
}

StructureVerdict start(TheoremId id, const PairInstance& inst) {
  StructureVerdict v;
  v.theorem = id;
  v.instance = inst;
  return v;
}

void finish(StructureVerdict& v, const std::string& fallback_clause) {
  if (!v.cases.empty()) {
    v.principal = v.cases.front().label;
    return;
  }
  v.counterexample = true;
  v.failed_clause = fallback_clause;
}

std::size_t quotient_size(const Morphism& phi, const SubsetMask& x) {
  return phi.image(x).size();
}

// |phi(S+T)| = |phi(S)| + |phi(T)| - 1.
bool quotient_kneser_equality(const Morphism& phi, const SubsetMask& s, const SubsetMask& t,
                              const SubsetMask& sum) {
  return quotient_size(phi, sum) + 1 == quotient_size(phi, s) + quotient_size(phi, t);
}

// min{|phi(S)|, |phi(T)|, |phi(G)| - |phi(S+T)|} >= 2.
bool needs_common_difference(const Morphism& phi, const SubsetMask& s, const SubsetMask& t,
                             const SubsetMask& sum) {
  const std::size_t q = phi.target.order();
  const std::size_t ps = quotient_size(phi, s);
  const std::size_t pt = quotient_size(phi, t);
  const std::size_t pst = quotient_size(phi, sum);
  return std::min({ps, pt, q - pst}) >= 2;
}

// The smallest a with to = a + from.
std::optional<Element> translate_between(const SubsetMask& from, const SubsetMask& to) {
  if (from.size() != to.size() || from.empty()) return std::nullopt;
  const GroupSpec& g = from.group();
  for (std::uint32_t ai = 0; ai < g.order(); ++ai)
    if (from.translate(Element{ai}) == to) return Element{ai};
  return std::nullopt;
}

struct NuMatch {
  std::uint32_t nu;
  std::string side;
};

// One of S \ S_u, T \ T_t is H-periodic, the other (H,-nu)-periodic, and
// |T_t + S_u| = |T_t| + |S_u| - nu - mu, 0 <= nu <= 1 - mu.
std::optional<NuMatch> periodic_ends(const Subgroup& h, const SubsetMask& s,
                                     const SubsetMask& s_last, const SubsetMask& t,
                                     const SubsetMask& t_last, int mu, bool hooked) {
  const SubsetMask s_rest = s - s_last;
  const SubsetMask t_rest = t - t_last;
  const std::int64_t ends = sz(sumset(t_last, s_last));
  auto chk = [&](int id, bool value) { return hooked ? check(id, value) : value; };
  for (std::uint32_t nu = 0; nu + mu <= 1; ++nu) {
    if (!chk(mutation::kN3EndSum, ends == sz(t_last) + sz(s_last) - nu - mu)) continue;
    for (const char* side : {"S", "T"}) {
      const bool s_side = side[0] == 'S';
      const SubsetMask& periodic = s_side ? s_rest : t_rest;
      const SubsetMask& minus = s_side ? t_rest : s_rest;
      if (chk(mutation::kN3Periodic, is_periodic_by(periodic, h)) &&
          chk(mutation::kN3MinusPeriodic, is_h_minus_periodic(minus, h, nu)))
        return NuMatch{nu, side};
    }
  }
  return std::nullopt;
}

HDecomposition with_last(HDecomposition d, std::size_t idx) {
  std::rotate(d.parts.begin() + idx, d.parts.begin() + idx + 1, d.parts.end());
  std::rotate(d.cosets.begin() + idx, d.cosets.begin() + idx + 1, d.cosets.end());
  d.is_progression = d.parts.size() == 1;
  d.wildcard = d.is_progression;
  return d;
}

// The (H-progression) search shared by Theorem-1.1 case (iii) and n-3 case
// (iv): orderings of S and T with a common difference, or arbitrary last
// parts when `progression` is false.
std::optional<CaseWitness> search_periodic_ends(const Morphism& phi, const SubsetMask& s,
                                                const SubsetMask& t, int mu, bool progression,
                                                bool hooked) {
  const Subgroup& h = phi.kernel;
  if (progression) {
    const auto so = h_progressions(s, phi);
    const auto to = h_progressions(t, phi);
    for (const auto& a : so) {
      for (const auto& b : to) {
        if (!same_difference(a, b)) continue;
        if (auto m = periodic_ends(h, s, a.parts.back(), t, b.parts.back(), mu, hooked)) {
          CaseWitness w;
          w.h = h;
          w.s_decomp = a;
          w.t_decomp = b;
          w.nu = m->nu;
          w.periodic_side = m->side;
          return w;
        }
      }
    }
    return std::nullopt;
  }
  const HDecomposition ds = h_decompose(s, phi);
  const HDecomposition dt = h_decompose(t, phi);
  for (std::size_t i = 0; i < ds.parts.size(); ++i) {
    for (std::size_t j = 0; j < dt.parts.size(); ++j) {
      if (auto m = periodic_ends(h, s, ds.parts[i], t, dt.parts[j], mu, hooked)) {
        CaseWitness w;
        w.h = h;
        w.s_decomp = with_last(ds, i);
        w.t_decomp = with_last(dt, j);
        w.nu = m->nu;
        w.periodic_side = m->side;
        return w;
      }
    }
  }
  return std::nullopt;
}

std::optional<CaseWitness> twelve_equalities(const PairInstance& inst, Workspace& ws) {
  const std::uint32_t n = inst.group.order();
  if (inst.mu != 0 || n != 12 || inst.s.size() != 4 || inst.t.size() != 4) return std::nullopt;
  const std::uint32_t k2 = ws.kappa(normalize(inst.t).first, 2).kappa;
  if (4 * k2 != 12) return std::nullopt;
  CaseWitness w;
  w.label = "i";
  w.facts["kappa2_tstar"] = k2;
  return w;
}

// Quasi-periodic partitions satisfying the three Kemperman equalities.
std::optional<CaseWitness> kemperman_witness(const Morphism& phi, const SubsetMask& a,
                                             const SubsetMask& b, const SubsetMask& sum) {
  if (!quotient_kneser_equality(phi, a, b, sum)) return std::nullopt;
  const Subgroup& h = phi.kernel;
  const auto pa = quasi_periodic_partitions(a, h);
  if (pa.empty()) return std::nullopt;
  const auto pb = quasi_periodic_partitions(b, h);
  const SubsetMask phi_b = phi.image(b);
  const SubsetMask neg_a = a.negate();
  for (const auto& x : pa) {
    for (const auto& y : pb) {
      const SubsetMask core = sumset(y.a1, x.a1);
      if (sz(core) != sz(x.a1) + sz(y.a1) - 1) continue;
      const SubsetMask probe = phi.image(sumset(core, neg_a)) & phi_b;
      if (probe.size() != 1) continue;
      CaseWitness w;
      w.h = h;
      w.a_part = x;
      w.b_part = y;
      return w;
    }
  }
  return std::nullopt;
}

bool is_klein(const Subgroup& h) {
  if (h.order() != 4) return false;
  bool klein = true;
  h.members.for_each([&](Element x) {
    if (h.members.group().element_order(x) == 4) klein = false;
  });
  return klein;
}

}  // namespace

const std::vector<TheoremId>& all_classifiers() {
  static const std::vector<TheoremId> ids = {
      TheoremId::k3x3, TheoremId::kTwoThird, TheoremId::kModular,    TheoremId::kNear,
      TheoremId::kN4,  TheoremId::kN3,       TheoremId::kKemperman, TheoremId::kGrynkiewicz};
  return ids;
}

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::k3x3: return "3x3";
    case TheoremId::kTwoThird: return "twothird";
    case TheoremId::kModular: return "modular";
    case TheoremId::kNear: return "near";
    case TheoremId::kN4: return "n4";
    case TheoremId::kN3: return "n3";
    case TheoremId::kKemperman: return "kemperman";
    case TheoremId::kGrynkiewicz: return "grynkiewicz";
  }
  return "?";
}

std::optional<TheoremId> parse_theorem(const std::string& name) {
  for (auto id : all_classifiers())
    if (name == to_string(id)) return id;
  return std::nullopt;
}

std::optional<std::string> hypothesis_failure(TheoremId id, const PairInstance& inst,
                                              Workspace& ws) {
  const GroupSpec& g = inst.group;
  const SubsetMask& s = inst.s;
  const SubsetMask& t = inst.t;
  const int mu = inst.mu;
  const std::int64_t n = g.order();
  if (!(s.group() == g) || (id != TheoremId::kNear && !(t.group() == g)))
    return std::string("group");

  if (id == TheoremId::kKemperman || id == TheoremId::kGrynkiewicz) {
    if (s.empty() || t.empty()) return std::string("nonempty");
    const std::int64_t ss = sz(sumset(s, t));
    if (id == TheoremId::kKemperman) {
      if (ss != sz(s) + sz(t) - 1) return std::string("sumset_size");
      if (ss > n - 2) return std::string("sumset_bound");
    } else {
      if (s.size() < 3) return std::string("size_a");
      if (s.size() > t.size()) return std::string("size_b");
      if (ss != sz(s) + sz(t)) return std::string("sumset_size");
      if (ss > n - 3) return std::string("sumset_bound");
    }
    if (!is_aperiodic(sumset(s, t))) return std::string("aperiodic");
    return std::nullopt;
  }

  if (mu != 0 && mu != 1) return std::string("mu");

  if (id == TheoremId::kNear) {
    if (!s.contains(Element{0})) return std::string("contains_zero");
    if (s.size() < 3) return std::string("size_s");
    if (2 * sz(s) > n + 5 * mu - 4) return std::string("size_upper");
    if (!is_generating(s)) return std::string("generating");
    if (ws.kappa(s, 3 - mu).kappa > s.size() - mu) return std::string("kappa_bound");
    if (s.size() == 3 && mu == 0 && ws.kappa(s, 4).kappa > s.size())
      return std::string("kappa4_bound");
    if (ws.degeneracy(s).status == Degeneracy::kDegenerate) return std::string("non_degenerate");
    return std::nullopt;
  }

  if (s.empty() || t.empty()) return std::string("nonempty");
  if (id == TheoremId::k3x3) {
    if (s.size() != 3) return std::string("size_s");
    if (t.size() != 3) return std::string("size_t");
  } else {
    if (id == TheoremId::kTwoThird || id == TheoremId::kModular) {
      if (!s.contains(Element{0})) return std::string("contains_zero");
    }
    if (sz(s) < 3 - mu) return std::string("size_s");
    if (id == TheoremId::kN3) {
      if (s.size() > t.size()) return std::string("size_t");
    } else if (std::max<std::int64_t>(4 - 2 * mu, sz(s)) > sz(t)) {
      return std::string("size_t");
    }
  }
  const SubsetMask sum = sumset(s, t);
  const std::int64_t ss = sz(sum);
  if (id == TheoremId::k3x3) {
    if (ss != 6 - mu) return std::string("sumset_size");
  } else {
    if (ss != sz(s) + sz(t) - mu) return std::string("sumset_size");
  }
  switch (id) {
    case TheoremId::kTwoThird:
    case TheoremId::kModular:
      if (3 * ss > 2 * n + 2 * mu) return std::string("sumset_bound");
      break;
    case TheoremId::kN4:
      if (ss > n - 4 + 2 * mu) return std::string("sumset_bound");
      break;
    case TheoremId::kN3:
      if (ss > n - 3 - mu) return std::string("sumset_bound");
      break;
    default:
      break;
  }
  if (!is_aperiodic(sum)) return std::string("aperiodic");
  if (id == TheoremId::kTwoThird || id == TheoremId::kModular) {
    if (!is_generating(s)) return std::string("generating");
    if (ws.degeneracy(s).status != Degeneracy::kDegenerate) return std::string("degenerate");
  }
  if (id == TheoremId::kN4 || id == TheoremId::kN3) {
    if (!generates_with(s, t)) return std::string("generating_pair");
  }
  return std::nullopt;
}

void require_hypotheses(TheoremId id, const PairInstance& inst, Workspace& ws) {
  if (auto clause = hypothesis_failure(id, inst, ws)) throw HypothesisError(to_string(id), *clause);
}

std::vector<std::pair<Subgroup, std::string>> super_atom_candidates(const SubsetMask& s,
                                                                    const SubsetMask& t,
                                                                    Workspace& ws) {
  std::vector<std::pair<Subgroup, std::string>> out;
  auto add = [&](const Subgroup& h, const std::string& role) {
    for (const auto& [k, r] : out)
      if (k == h) return;
    out.emplace_back(h, role);
  };
  if (const auto& a = ws.super_atom(s)) add(a->subgroup, "super_atom_S");
  const SubsetMask ts = exterior(s, t);
  if (!ts.empty())
    if (const auto& a = ws.super_atom(ts)) add(a->subgroup, "super_atom_TS");
  if (s.group().order() == 12) {
    const auto& subs = ws.subgroups(s.group());
    for (const auto& h : subs)
      if (!h.is_whole()) add(h, "other_subgroup");
    add(subs.back(), "whole_group");
  }
  return out;
}

StructureVerdict find_cases(TheoremId id, const PairInstance& inst, Workspace& ws) {
  StructureVerdict v = start(id, inst);
  const GroupSpec& g = inst.group;
  const SubsetMask& s = inst.s;
  const SubsetMask& t = inst.t;
  const int mu = inst.mu;
  std::string fallback = "no-case";

  switch (id) {
    case TheoremId::k3x3: {
      const auto ps = find_progression(s, 0);
      const auto pt = find_progression(t, 0);
      if (ps || pt) {
        CaseWitness w;
        w.label = "progression";
        w.branch = ps ? "S" : "T";
        if (ps) w.s_prog = ps;
        if (pt) w.t_prog = pt;
        v.cases.push_back(std::move(w));
      }
      if (auto a = translate_between(s, t)) {
        CaseWitness w;
        w.label = "translate";
        w.a = a;
        v.cases.push_back(std::move(w));
      }
      break;
    }

    case TheoremId::kTwoThird:
    case TheoremId::kModular: {
      if (auto w = twelve_equalities(inst, ws)) v.cases.push_back(std::move(*w));
      const auto& hyper = ws.hyper_atom(s);
      if (!hyper) break;
      const Subgroup& h = hyper->subgroup;
      const Morphism& phi = ws.quotient(h);
      if (id == TheoremId::kTwoThird) {
        if (mu == 0) {
          if (auto e = classify_essential_pair(s, t, phi)) {
            CaseWitness w;
            w.label = "ii";
            w.h = h;
            w.h_role = "hyper_atom";
            w.essential = std::move(e);
            v.cases.push_back(std::move(w));
          }
        }
        if (auto w = search_periodic_ends(phi, s, t, mu, true, false)) {
          const std::int64_t excess = sz(sumset(t, h.members)) - sz(t);
          w->facts["t_excess"] = excess;
          if (excess <= static_cast<std::int64_t>(h.order()) - mu) {
            w->label = "iii";
            w->h_role = "hyper_atom";
            v.cases.push_back(std::move(*w));
          } else {
            fallback = "iii.moreover";
          }
        }
      } else {
        const SubsetMask sum = sumset(s, t);
        if (quotient_kneser_equality(phi, s, t, sum)) {
          if (auto p = common_progression(phi.image(s), 0, phi.image(t), 0)) {
            CaseWitness w;
            w.label = "ii";
            w.h = h;
            w.h_role = "hyper_atom";
            w.quotient_level = true;
            w.s_prog = p->first;
            w.t_prog = p->second;
            v.cases.push_back(std::move(w));
          }
        }
      }
      if (!hyper->unique) {
        for (auto& c : v.cases) c.facts["hyper_atom_unique"] = 0;
      }
      break;
    }

    case TheoremId::kNear: {
      if (auto p = find_progression(s, static_cast<unsigned>(1 - mu))) {
        CaseWitness w;
        w.label = "progression";
        w.s_prog = p;
        v.cases.push_back(std::move(w));
      }
      break;
    }

    case TheoremId::kN4:
    case TheoremId::kN3: {
      const bool n3 = id == TheoremId::kN3;
      const auto hook = [&](int site, bool value) { return n3 ? check(site, value) : value; };
      if (n3 && hook(mutation::kN3Size, s.size() == 3 && mu == 0)) {
        if (auto a = translate_between(s, t); hook(mutation::kN3Translate, a.has_value())) {
          CaseWitness w;
          w.label = "i";
          w.branch = "translate";
          w.a = a;
          v.cases.push_back(std::move(w));
        } else {
          // T = G \ (-a - 2S) = C - a with C = G \ (-2S)
          const SubsetMask c = multiple_sumset(s, 2).negate().complement();
          auto shift = c.empty() ? std::nullopt : translate_between(c, t);
          if (hook(mutation::kN3Complement, shift.has_value())) {
            CaseWitness w;
            w.label = "i";
            w.branch = "complement";
            if (shift) w.a = g.neg(*shift);
            v.cases.push_back(std::move(w));
          }
        }
      }
      const unsigned j = static_cast<unsigned>(1 - mu);
      auto prog = common_progression(s, j, t, j);
      if (hook(mutation::kN3Progressions, prog.has_value())) {
        CaseWitness w;
        w.label = n3 ? "ii" : "i";
        if (prog) {
          w.s_prog = prog->first;
          w.t_prog = prog->second;
        }
        v.cases.push_back(std::move(w));
      }
      const auto candidates = super_atom_candidates(s, t, ws);
      const SubsetMask sum = sumset(s, t);
      if (n3 && mu == 0) {
        for (const auto& [h, role] : candidates) {
          if (auto e = classify_essential_pair(s, t, ws.quotient(h))) {
            CaseWitness w;
            w.label = "iii";
            w.h = h;
            w.h_role = role;
            w.essential = std::move(e);
            v.cases.push_back(std::move(w));
            break;
          }
        }
      }
      for (const auto& [h, role] : candidates) {
        const Morphism& phi = ws.quotient(h);
        if (!hook(mutation::kN3QuotientEquality, quotient_kneser_equality(phi, s, t, sum))) continue;
        const bool progression = needs_common_difference(phi, s, t, sum);
        if (!n3) {
          CaseWitness w;
          if (progression) {
            auto p = common_progression(phi.image(s), 0, phi.image(t), 0);
            if (!p) continue;
            w.quotient_level = true;
            w.s_prog = p->first;
            w.t_prog = p->second;
          }
          w.label = "ii";
          w.h = h;
          w.h_role = role;
          v.cases.push_back(std::move(w));
          break;
        }
        if (auto w = search_periodic_ends(phi, s, t, mu, progression, true)) {
          w->label = "iv";
          w->h_role = role;
          w->facts["common_difference_required"] = progression;
          v.cases.push_back(std::move(*w));
          break;
        }
      }
      break;
    }

    case TheoremId::kKemperman: {
      const SubsetMask sum = sumset(s, t);
      for (const auto& h : ws.subgroups(g)) {
        if (h.is_whole()) continue;
        if (auto w = kemperman_witness(ws.quotient(h), s, t, sum)) {
          w->label = "partition";
          w->h_role = "searched";
          v.cases.push_back(std::move(*w));
          break;
        }
      }
      break;
    }

    case TheoremId::kGrynkiewicz: {
      if (s.size() == 3) {
        if (auto a = translate_between(s, t)) {
          CaseWitness w;
          w.label = "1";
          w.branch = "translate";
          w.a = a;
          v.cases.push_back(std::move(w));
        } else {
          const SubsetMask c = multiple_sumset(s, 2).negate().complement();
          if (auto shift = c.empty() ? std::nullopt : translate_between(c, t)) {
            CaseWitness w;
            w.label = "1";
            w.branch = "complement";
            w.a = g.neg(*shift);
            v.cases.push_back(std::move(w));
          }
        }
      }
      {
        const SubsetMask sum = sumset(s, t);
        bool done = false;
        for (std::uint32_t ai = 0; ai < g.order() && !done; ++ai) {
          SubsetMask a2 = s;
          a2.insert(Element{ai});
          const SubsetMask part = sum | t.translate(Element{ai});
          for (std::uint32_t bi = 0; bi < g.order() && !done; ++bi) {
            SubsetMask b2 = t;
            b2.insert(Element{bi});
            SubsetMask total = part | s.translate(Element{bi});
            total.insert(g.add(Element{ai}, Element{bi}));
            if (sz(total) == sz(a2) + sz(b2) - 1) {
              CaseWitness w;
              w.label = "2";
              w.a = Element{ai};
              w.b = Element{bi};
              v.cases.push_back(std::move(w));
              done = true;
            }
          }
        }
      }
      {
        const SubsetMask sum = sumset(s, t);
        for (const auto& h : ws.subgroups(g)) {
          if (auto w = kemperman_witness(ws.quotient(h), s, t, sum)) {
            w->label = "3";
            w->h_role = "searched";
            v.cases.push_back(std::move(*w));
            break;
          }
        }
      }
      for (const auto& h : ws.subgroups(g)) {
        if (!is_klein(h)) continue;
        if (auto e = classify_essential_pair(s, t, ws.quotient(h), EssentialKind::kIII)) {
          CaseWitness w;
          w.label = "4";
          w.h = h;
          w.h_role = "searched";
          w.essential = std::move(e);
          v.cases.push_back(std::move(w));
          break;
        }
      }
      break;
    }
  }
  finish(v, fallback);
  return v;
}

StructureVerdict classify(TheoremId id, const PairInstance& inst, Workspace& ws) {
  require_hypotheses(id, inst, ws);
  StructureVerdict v = find_cases(id, inst, ws);
  if (v.counterexample) return v;
  const audit::AuditResult r = audit::audit_verdict(v, ws);
  v.verified = r.ok;
  if (!r.ok) {
    v.counterexample = true;
    v.failed_clause = "audit:" + r.reason;
  }
  return v;
}

StructureVerdict classify(TheoremId id, const PairInstance& inst) {
  Workspace ws;
  return classify(id, inst, ws);
}

StructureVerdict classify_3x3(const PairInstance& inst) { return classify(TheoremId::k3x3, inst); }
StructureVerdict classify_two_third(const PairInstance& inst) {
  return classify(TheoremId::kTwoThird, inst);
}
StructureVerdict classify_modular(const PairInstance& inst) {
  return classify(TheoremId::kModular, inst);
}
StructureVerdict classify_near_progression(const SubsetMask& s, int mu) {
  return classify(TheoremId::kNear, PairInstance{s.group(), s, SubsetMask(s.group()), mu});
}
StructureVerdict classify_n_minus_4(const PairInstance& inst) {
  return classify(TheoremId::kN4, inst);
}
StructureVerdict classify_n_minus_3(const PairInstance& inst) {
  return classify(TheoremId::kN3, inst);
}
StructureVerdict kemperman_partition(const SubsetMask& a, const SubsetMask& b) {
  return classify(TheoremId::kKemperman, PairInstance{a.group(), a, b, 1});
}
StructureVerdict grynkiewicz_classify(const SubsetMask& a, const SubsetMask& b) {
  return classify(TheoremId::kGrynkiewicz, PairInstance{a.group(), a, b, 0});
}

}  // namespace smallsum
