#include "smallsum/structure.hpp"

#include <algorithm>

#include "smallsum/mutation.hpp"
#include "smallsum/setops.hpp"

namespace smallsum {

namespace {

using mutation::check;

bool canonical_difference(const GroupSpec& g, Element r) { return r.idx <= g.neg(r).idx; }

// Positions of A along the <r>-orbit through min(A); empty when A leaves
// that orbit.
struct Orbit {
  std::vector<Element> walk;  // walk[p] = a0 + p*r
  std::vector<bool> occupied;
};

std::optional<Orbit> orbit_positions(const SubsetMask& a, Element r) {
  const GroupSpec& g = a.group();
  const std::uint32_t ord = g.element_order(r);
  if (a.size() > ord) return std::nullopt;
  Orbit o;
  o.walk.reserve(ord);
  o.occupied.assign(ord, false);
  Element e = a.min_element();
  std::uint32_t hits = 0;
  for (std::uint32_t p = 0; p < ord; ++p) {
    o.walk.push_back(e);
    if (a.contains(e)) {
      o.occupied[p] = true;
      ++hits;
    }
    e = g.add(e, r);
  }
  if (hits != a.size()) return std::nullopt;
  return o;
}

// Witnesses with difference r and exactly j deletions, in start order.
void witnesses_for(const SubsetMask& a, Element r, unsigned j, const Orbit& o,
                   std::vector<ProgressionWitness>& out, bool first_only) {
  const std::uint32_t ord = static_cast<std::uint32_t>(o.walk.size());
  const std::uint32_t len = a.size() + j;
  if (len > ord) return;
  auto make = [&](std::uint32_t st, bool wraps) {
    ProgressionWitness w;
    w.difference = r;
    w.start = o.walk[st];
    w.length = len;
    w.wraps = wraps;
    for (std::uint32_t i = 0; i < len; ++i) {
      const std::uint32_t p = (st + i) % ord;
      if (!o.occupied[p]) w.deleted.push_back(o.walk[p]);
    }
    std::sort(w.deleted.begin(), w.deleted.end());
    return w;
  };
  if (len == ord) {
    out.push_back(make(0, true));
    return;
  }
  std::uint32_t inside = 0;
  for (std::uint32_t i = 0; i < len; ++i) inside += o.occupied[i];
  std::vector<ProgressionWitness> found;
  for (std::uint32_t st = 0; st < ord; ++st) {
    if (inside == a.size()) {
      found.push_back(make(st, false));
      if (first_only) break;
    }
    inside -= o.occupied[st];
    inside += o.occupied[(st + len) % ord];
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    return x.start < y.start;
  });
  for (auto& w : found) out.push_back(std::move(w));
}

ProgressionWitness wildcard_witness(const SubsetMask& a) {
  ProgressionWitness w;
  w.wildcard = true;
  w.start = a.min_element();
  w.length = 1;
  return w;
}

}  // namespace

SubsetMask reconstruct(const GroupSpec& g, const ProgressionWitness& w) {
  SubsetMask out(g);
  Element e = w.start;
  for (std::uint32_t i = 0; i < w.length; ++i) {
    out.insert(e);
    e = g.add(e, w.difference);
  }
  for (auto d : w.deleted) out.erase(d);
  return out;
}

std::vector<ProgressionWitness> detect_progression(const SubsetMask& a, unsigned j_max) {
  std::vector<ProgressionWitness> out;
  if (a.empty()) return out;
  if (a.size() == 1) {
    out.push_back(wildcard_witness(a));
    return out;
  }
  const GroupSpec& g = a.group();
  for (std::uint32_t ri = 1; ri < g.order(); ++ri) {
    const Element r{ri};
    if (!canonical_difference(g, r)) continue;
    const auto o = orbit_positions(a, r);
    if (!o) continue;
    for (unsigned j = 0; j <= j_max; ++j) witnesses_for(a, r, j, *o, out, false);
  }
  return out;
}

std::optional<ProgressionWitness> find_progression(const SubsetMask& a, unsigned j,
                                                   std::optional<Element> difference) {
  if (a.empty()) return std::nullopt;
  if (a.size() == 1) return wildcard_witness(a);
  const GroupSpec& g = a.group();
  std::vector<ProgressionWitness> out;
  auto try_r = [&](Element r) {
    if (r.idx == 0) return false;
    const auto o = orbit_positions(a, r);
    if (!o) return false;
    witnesses_for(a, r, j, *o, out, true);
    return !out.empty();
  };
  if (difference) {
    const Element r = canonical_difference(g, *difference) ? *difference : g.neg(*difference);
    if (try_r(r)) return out.front();
    return std::nullopt;
  }
  for (std::uint32_t ri = 1; ri < g.order(); ++ri)
    if (canonical_difference(g, Element{ri}) && try_r(Element{ri})) return out.front();
  return std::nullopt;
}

bool is_progression(const SubsetMask& a) { return find_progression(a, 0).has_value(); }

std::optional<std::pair<ProgressionWitness, ProgressionWitness>> common_progression(
    const SubsetMask& a, unsigned j_a, const SubsetMask& b, unsigned j_b) {
  if (a.empty() || b.empty()) return std::nullopt;
  if (a.size() == 1 || b.size() == 1) {
    auto wa = find_progression(a, j_a);
    auto wb = find_progression(b, j_b);
    if (!wa || !wb) return std::nullopt;
    if (wa->wildcard) wa->difference = wb->difference;
    if (wb->wildcard) wb->difference = wa->difference;
    return std::pair{*wa, *wb};
  }
  const GroupSpec& g = a.group();
  for (std::uint32_t ri = 1; ri < g.order(); ++ri) {
    const Element r{ri};
    if (!canonical_difference(g, r)) continue;
    auto wa = find_progression(a, j_a, r);
    if (!wa) continue;
    auto wb = find_progression(b, j_b, r);
    if (wb) return std::pair{*wa, *wb};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

struct CosetParts {
  std::vector<std::uint32_t> cosets;  // distinct images, ascending
  std::vector<SubsetMask> parts;      // parallel to `cosets`
};

CosetParts split(const SubsetMask& a, const Morphism& phi) {
  std::vector<std::int64_t> slot(phi.target.order(), -1);
  CosetParts cp;
  std::vector<std::uint32_t> seen;
  a.for_each([&](Element x) {
    const std::uint32_t c = phi.table[x.idx];
    if (slot[c] < 0) {
      slot[c] = 0;
      seen.push_back(c);
    }
  });
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) slot[seen[i]] = static_cast<std::int64_t>(i);
  cp.cosets = seen;
  cp.parts.assign(seen.size(), SubsetMask(a.group()));
  a.for_each([&](Element x) { cp.parts[slot[phi.table[x.idx]]].insert(x); });
  return cp;
}

HDecomposition ordered(const Morphism& phi, const CosetParts& cp,
                       const std::vector<std::uint32_t>& order) {
  HDecomposition d;
  d.h = phi.kernel;
  for (auto c : order) {
    const auto it = std::lower_bound(cp.cosets.begin(), cp.cosets.end(), c);
    d.parts.push_back(cp.parts[it - cp.cosets.begin()]);
    d.cosets.push_back(Element{c});
  }
  return d;
}

}  // namespace

std::vector<HDecomposition> h_progressions(const SubsetMask& a, const Morphism& phi) {
  std::vector<HDecomposition> out;
  if (a.empty()) return out;
  const CosetParts cp = split(a, phi);
  const GroupSpec& q = phi.target;
  const std::size_t m = cp.cosets.size();
  if (m == 1) {
    HDecomposition d = ordered(phi, cp, cp.cosets);
    d.is_progression = true;
    d.wildcard = true;
    out.push_back(std::move(d));
    return out;
  }
  std::vector<bool> in(q.order(), false);
  for (auto c : cp.cosets) in[c] = true;
  for (std::uint32_t di = 1; di < q.order(); ++di) {
    const Element d{di};
    const std::uint32_t ord = q.element_order(d);
    if (ord < m) continue;
    std::vector<std::uint32_t> starts;
    if (ord == m) {
      // phi(A) must be a whole coset of <d>; then every member starts it.
      starts = cp.cosets;
    } else {
      for (auto c : cp.cosets)
        if (!in[q.sub(Element{c}, d).idx]) starts.push_back(c);
      if (starts.size() != 1) continue;
    }
    for (auto st : starts) {
      std::vector<std::uint32_t> order;
      Element e{st};
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) {
        ok = in[e.idx];
        order.push_back(e.idx);
        e = q.add(e, d);
      }
      if (!ok) {
        if (ord == m) break;  // not a coset of <d>, no start works
        continue;
      }
      HDecomposition dec = ordered(phi, cp, order);
      dec.is_progression = true;
      dec.difference = d;
      out.push_back(std::move(dec));
    }
  }
  return out;
}

HDecomposition h_decompose(const SubsetMask& a, const Morphism& phi) {
  if (a.empty()) throw Error("h_decompose: empty set");
  const auto progs = h_progressions(a, phi);
  for (const auto& d : progs)
    if (d.wildcard || canonical_difference(phi.target, d.difference)) return d;
  const CosetParts cp = split(a, phi);
  std::vector<std::uint32_t> order = cp.cosets;
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return phi.representatives[x] < phi.representatives[y];
  });
  return ordered(phi, cp, order);
}

HDecomposition h_decompose(const SubsetMask& a, const Subgroup& h) {
  return h_decompose(a, quotient(a.group(), h));
}

bool same_difference(const HDecomposition& a, const HDecomposition& b) {
  if (!a.is_progression || !b.is_progression) return false;
  return a.wildcard || b.wildcard || a.difference == b.difference;
}

const char* to_string(EssentialKind kind) {
  switch (kind) {
    case EssentialKind::kI: return "i";
    case EssentialKind::kII: return "ii";
    case EssentialKind::kIII: return "iii";
  }
  return "?";
}

namespace {

bool kind_i(const Subgroup& h, const HDecomposition& s, const HDecomposition& t) {
  return check(mutation::kEssIHalf, h.order() - 1 == 1) &&
         check(mutation::kEssIS0, s.parts.front().size() == 1) &&
         check(mutation::kEssISu, s.parts.back().size() == 1) &&
         check(mutation::kEssIT0, t.parts.front().size() == 1) &&
         check(mutation::kEssITt, t.parts.back().size() == 1);
}

bool kind_ii(const Subgroup& h, const HDecomposition& s, const HDecomposition& t) {
  if (s.parts.size() < 2 || t.parts.size() < 2) return false;
  const std::size_t u = s.last();
  const std::size_t tt = t.last();
  return check(mutation::kEssIISu, s.parts[u].size() == 1) &&
         check(mutation::kEssIITt, t.parts[tt].size() == 1) &&
         check(mutation::kEssIISPrev, s.parts[u - 1].size() == h.order() - 1) &&
         check(mutation::kEssIITPrev, t.parts[tt - 1].size() == h.order() - 1) &&
         check(mutation::kEssIICross,
               sumset(t.parts[tt - 1], s.parts[u]) == sumset(t.parts[tt], s.parts[u - 1]));
}

// The translate of `part` through 0, when it is a subgroup of order 2.
std::optional<Subgroup> order_two_shape(const SubsetMask& part) {
  if (part.size() != 2) return std::nullopt;
  SubsetMask star = normalize(part).first;
  if (!is_subgroup(star)) return std::nullopt;
  return Subgroup{star, {star.elements().back()}};
}

bool kind_iii(const Subgroup& h, const HDecomposition& s, const HDecomposition& t,
              std::optional<Subgroup>& k0, std::optional<Subgroup>& k1) {
  auto a0 = order_two_shape(s.parts.front());
  auto a1 = order_two_shape(s.parts.back());
  if (!check(mutation::kEssIIIS0, a0.has_value()) || !a0) return false;
  if (!check(mutation::kEssIIISu, a1.has_value()) || !a1) return false;
  if (!check(mutation::kEssIIIT0, normalize(t.parts.front()).first == a0->members)) return false;
  if (!check(mutation::kEssIIITt, normalize(t.parts.back()).first == a1->members)) return false;
  const bool direct = a0->members.is_subset_of(h.members) && a1->members.is_subset_of(h.members) &&
                      (a0->members & a1->members).size() == 1 &&
                      sumset(a0->members, a1->members) == h.members;
  if (!check(mutation::kEssIIIDirectSum, direct)) return false;
  k0 = a0;
  k1 = a1;
  return true;
}

}  // namespace

std::optional<EssentialPairWitness> classify_essential_pair(const SubsetMask& s,
                                                            const SubsetMask& t,
                                                            const Morphism& phi,
                                                            std::optional<EssentialKind> only) {
  if (s.empty() || t.empty()) return std::nullopt;
  const Subgroup& h = phi.kernel;
  const auto defect = [&](const SubsetMask& x) {
    return static_cast<std::int64_t>(sumset(x, h.members).size()) - x.size();
  };
  if (!check(mutation::kEssSDefect, defect(s) == h.order())) return std::nullopt;
  if (!check(mutation::kEssTDefect, defect(t) == h.order())) return std::nullopt;

  const auto s_orders = h_progressions(s, phi);
  const auto t_orders = h_progressions(t, phi);
  for (EssentialKind kind : {EssentialKind::kI, EssentialKind::kII, EssentialKind::kIII}) {
    if (only && kind != *only) continue;
    for (const auto& so : s_orders) {
      for (const auto& to : t_orders) {
        if (!check(mutation::kEssSameDifference, same_difference(so, to))) continue;
        std::optional<Subgroup> k0, k1;
        bool holds = false;
        switch (kind) {
          case EssentialKind::kI: holds = kind_i(h, so, to); break;
          case EssentialKind::kII: holds = kind_ii(h, so, to); break;
          case EssentialKind::kIII: holds = kind_iii(h, so, to, k0, k1); break;
        }
        if (holds) return EssentialPairWitness{h, kind, so, to, k0, k1};
      }
    }
  }
  return std::nullopt;
}

std::optional<EssentialPairWitness> classify_essential_pair(const SubsetMask& s,
                                                            const SubsetMask& t,
                                                            const Subgroup& h,
                                                            std::optional<EssentialKind> only) {
  return classify_essential_pair(s, t, quotient(s.group(), h), only);
}

bool is_vosper(const SubsetMask& s, const KappaOptions& options) {
  if (s.empty()) throw Error("is_vosper: empty set");
  if (s.group().order() < 3) return true;
  const ConnectivityReport r = kappa(normalize(s).first, 2, options);
  return !r.separable || r.kappa >= s.size();
}

std::vector<QuasiPeriodicPartition> quasi_periodic_partitions(const SubsetMask& a,
                                                              const Subgroup& h) {
  std::vector<QuasiPeriodicPartition> out;
  if (a.empty()) return out;
  const Morphism phi = quotient(a.group(), h);
  const CosetParts cp = split(a, phi);
  std::vector<std::size_t> order(cp.cosets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return phi.representatives[cp.cosets[x]] < phi.representatives[cp.cosets[y]];
  });
  for (auto i : order) {
    SubsetMask a0 = a - cp.parts[i];
    if (is_periodic_by(a0, h)) out.push_back({h, std::move(a0), cp.parts[i]});
  }
  return out;
}

bool is_h_minus_periodic(const SubsetMask& x, const Subgroup& h, std::uint32_t nu) {
  const std::uint32_t hull = sumset(x, h.members).size();
  const std::uint32_t delta = hull - x.size();
  if (nu < delta || (nu - delta) % h.order() != 0) return false;
  return static_cast<std::uint64_t>(hull) + (nu - delta) <= x.group().order();
}

}  // namespace smallsum
