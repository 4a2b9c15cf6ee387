#include "smallsum/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <unordered_set>

#include "detail/smith.hpp"

namespace smallsum {

namespace {

// members + <x>, assuming members is a subgroup.
SubsetMask extend(const GroupSpec& g, const SubsetMask& members, Element x) {
  SubsetMask out = members;
  Element step = x;
  while (!members.contains(step)) {
    out |= members.translate(step);
    step = g.add(step, x);
  }
  return out;
}

std::vector<std::int64_t> digits64(const GroupSpec& g, Element x) {
  const auto d = g.digits(x);
  return {d.begin(), d.end()};
}

GroupSpec group_from_invariants(const detail::IntMatrix& d, std::size_t count) {
  std::vector<std::uint32_t> factors;
  for (std::size_t i = 0; i < count; ++i) {
    const std::int64_t v = i < d.size() && i < d[i].size() ? d[i][i] : 0;
    if (v == 0) throw Error("infinite invariant factor in a finite quotient");
    if (v > 1) factors.push_back(static_cast<std::uint32_t>(v));
  }
  if (factors.empty()) factors.push_back(1);
  return make_group(std::move(factors), kDefaultOrderCap);
}

// Reduces U*x modulo the nontrivial invariant factors and encodes the result
// as an index of `target`.
std::uint32_t encode(const detail::IntMatrix& u, const detail::IntMatrix& d,
                     std::span<const std::int64_t> x, const GroupSpec& target) {
  std::vector<std::int64_t> coords;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::int64_t di = i < d[i].size() ? d[i][i] : 0;
    if (di <= 1) continue;
    __int128 acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += static_cast<__int128>(u[i][j]) * x[j];
    std::int64_t r = static_cast<std::int64_t>(acc % di);
    if (r < 0) r += di;
    coords.push_back(r);
  }
  if (coords.empty()) coords.push_back(0);
  return target.from_digits(coords).idx;
}

}  // namespace

Subgroup subgroup_generated(const GroupSpec& g, const SubsetMask& seeds) {
  Subgroup h{SubsetMask::from_indices(g, {0}), {}};
  seeds.for_each([&](Element s) {
    if (h.members.contains(s)) return;
    h.members = extend(g, h.members, s);
    h.generators.push_back(s);
  });
  return h;
}

bool is_subgroup(const SubsetMask& mask) {
  if (mask.empty() || !mask.contains(Element{0})) return false;
  bool closed = true;
  mask.for_each([&](Element x) {
    if (closed && !(mask.translate(x) == mask)) closed = false;
  });
  return closed;
}

Subgroup as_subgroup(const SubsetMask& mask) {
  if (!is_subgroup(mask)) throw Error("set is not a subgroup: " + mask.to_hex());
  return subgroup_generated(mask.group(), mask);
}

std::vector<Subgroup> all_subgroups(const GroupSpec& g, std::size_t max_count) {
  std::vector<Subgroup> found;
  std::unordered_set<SubsetMask, SubsetMaskHash> seen;
  std::deque<std::size_t> queue;
  found.push_back(Subgroup{SubsetMask::from_indices(g, {0}), {}});
  seen.insert(found.back().members);
  queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t at = queue.front();
    queue.pop_front();
    SubsetMask covered = found[at].members;
    for (std::uint32_t xi = 0; xi < g.order(); ++xi) {
      const Element x{xi};
      if (covered.contains(x)) continue;
      const SubsetMask coset = found[at].members.translate(x);
      covered |= coset;
      SubsetMask k = extend(g, found[at].members, x);
      if (seen.insert(k).second) {
        auto gens = found[at].generators;
        gens.push_back(x);
        found.push_back(Subgroup{std::move(k), std::move(gens)});
        if (found.size() > max_count) {
          throw Error("more than " + std::to_string(max_count) + " subgroups in group " +
                      g.to_string());
        }
        queue.push_back(found.size() - 1);
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return lex_less(a.members, b.members);
  });
  return found;
}

std::shared_ptr<const std::vector<Subgroup>> cached_subgroups(const GroupSpec& g) {
  static std::mutex mu;
  static std::map<std::vector<std::uint32_t>, std::shared_ptr<const std::vector<Subgroup>>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(g.factors()); it != cache.end()) return it->second;
  }
  auto list = std::make_shared<const std::vector<Subgroup>>(all_subgroups(g));
  std::lock_guard lock(mu);
  return cache.emplace(g.factors(), std::move(list)).first->second;
}

SubsetMask Morphism::image(const SubsetMask& a) const {
  SubsetMask out(target);
  a.for_each([&](Element x) { out.insert(Element{table[x.idx]}); });
  return out;
}

SubsetMask Morphism::preimage(const SubsetMask& c) const {
  SubsetMask out(source);
  for (std::uint32_t x = 0; x < source.order(); ++x)
    if (c.contains(Element{table[x]})) out.insert(Element{x});
  return out;
}

std::uint32_t Morphism::coset_rank(Element x) const {
  const std::uint32_t rep = representatives[table[x.idx]];
  std::uint32_t rank = 0;
  for (auto r : representatives)
    if (r < rep) ++rank;
  return rank;
}

Morphism quotient(const GroupSpec& g, const Subgroup& h) {
  if (!(h.members.group() == g)) throw Error("quotient: subgroup belongs to another group");
  if (!is_subgroup(h.members)) throw Error("quotient: kernel is not closed under addition");
  const Subgroup kernel =
      h.generators.empty() && !h.is_trivial() ? subgroup_generated(g, h.members) : h;

  const auto& f = g.factors();
  const std::size_t m = f.size();
  detail::IntMatrix rel(m, std::vector<std::int64_t>(m + kernel.generators.size(), 0));
  for (std::size_t i = 0; i < m; ++i) rel[i][i] = f[i];
  for (std::size_t j = 0; j < kernel.generators.size(); ++j) {
    const auto d = g.digits(kernel.generators[j]);
    for (std::size_t i = 0; i < m; ++i) rel[i][m + j] = d[i];
  }
  auto snf = detail::smith_normal_form(std::move(rel));
  GroupSpec target = group_from_invariants(snf.D, m);

  Morphism phi{g, kernel, target, std::vector<std::uint32_t>(g.order()), {}};
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    const auto d = digits64(g, Element{x});
    phi.table[x] = encode(snf.U, snf.D, d, target);
  }
  phi.representatives.assign(target.order(), g.order());
  std::uint32_t kernel_size = 0;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    auto& rep = phi.representatives[phi.table[x]];
    if (rep == g.order()) rep = x;
    if (phi.table[x] == 0) {
      ++kernel_size;
      if (!kernel.members.contains(Element{x})) throw Error("quotient: inconsistent kernel");
    }
  }
  if (kernel_size != kernel.order() ||
      static_cast<std::uint64_t>(target.order()) * kernel.order() != g.order()) {
    throw Error("quotient: inconsistent coset structure");
  }
  return phi;
}

SubsetMask Embedding::pull_back(const SubsetMask& in_parent) const {
  SubsetMask out(group);
  for (std::uint32_t y = 0; y < group.order(); ++y)
    if (in_parent.contains(Element{to_parent[y]})) out.insert(Element{y});
  return out;
}

Embedding restrict_to(const GroupSpec& g, const Subgroup& k) {
  if (!is_subgroup(k.members)) throw Error("restrict_to: not a subgroup");
  const Subgroup sub = k.generators.empty() && !k.is_trivial() ? subgroup_generated(g, k.members) : k;
  const std::size_t r = sub.generators.size();
  if (r == 0) {
    return Embedding{make_group({1}), {0}, k.members};
  }
  const auto& f = g.factors();
  const std::size_t m = f.size();

  // Relations among the generators: kernel of Z^r -> G.
  detail::IntMatrix a(m, std::vector<std::int64_t>(r + m, 0));
  for (std::size_t j = 0; j < r; ++j) {
    const auto d = g.digits(sub.generators[j]);
    for (std::size_t i = 0; i < m; ++i) a[i][j] = d[i];
  }
  for (std::size_t i = 0; i < m; ++i) a[i][r + i] = f[i];
  const auto outer = detail::smith_normal_form(std::move(a));
  detail::IntMatrix lattice(r, std::vector<std::int64_t>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) lattice[i][j] = outer.V[i][m + j];
  const auto inner = detail::smith_normal_form(std::move(lattice));
  GroupSpec kg = group_from_invariants(inner.D, r);
  if (kg.order() != sub.order()) throw Error("restrict_to: inconsistent subgroup structure");

  // Coordinates of each member over the generators.
  std::vector<std::vector<std::int64_t>> coords(g.order());
  std::vector<bool> reached(g.order(), false);
  std::deque<std::uint32_t> queue{0};
  coords[0].assign(r, 0);
  reached[0] = true;
  while (!queue.empty()) {
    const std::uint32_t x = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < r; ++j) {
      const std::uint32_t y = g.add(Element{x}, sub.generators[j]).idx;
      if (reached[y]) continue;
      reached[y] = true;
      coords[y] = coords[x];
      coords[y][j] += 1;
      queue.push_back(y);
    }
  }
  Embedding emb{kg, std::vector<std::uint32_t>(kg.order(), g.order()), sub.members};
  sub.members.for_each([&](Element y) {
    const std::uint32_t idx = encode(inner.U, inner.D, coords[y.idx], kg);
    if (emb.to_parent[idx] != g.order()) throw Error("restrict_to: embedding is not injective");
    emb.to_parent[idx] = y.idx;
  });
  return emb;
}

}  // namespace smallsum
