#pragma once

// Naive reference implementations over sorted index vectors. Group
// arithmetic is redone from the factor list, so nothing here goes through
// the library beyond the factor list itself.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "smallsum/subset.hpp"

namespace oracle {

using Set = std::set<std::uint32_t>;

struct Group {
  std::vector<std::uint32_t> d;
  std::uint32_t n = 1;

  explicit Group(std::vector<std::uint32_t> factors) : d(std::move(factors)) {
    for (auto x : d) n *= x;
  }

  std::vector<std::uint32_t> digits(std::uint32_t x) const {
    std::vector<std::uint32_t> out(d.size());
    for (std::size_t i = d.size(); i-- > 0;) {
      out[i] = x % d[i];
      x /= d[i];
    }
    return out;
  }
  std::uint32_t index(const std::vector<std::uint32_t>& v) const {
    std::uint32_t x = 0;
    for (std::size_t i = 0; i < d.size(); ++i) x = x * d[i] + v[i] % d[i];
    return x;
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    auto x = digits(a), y = digits(b);
    for (std::size_t i = 0; i < d.size(); ++i) x[i] = (x[i] + y[i]) % d[i];
    return index(x);
  }
  std::uint32_t neg(std::uint32_t a) const {
    auto x = digits(a);
    for (std::size_t i = 0; i < d.size(); ++i) x[i] = (d[i] - x[i]) % d[i];
    return index(x);
  }

  Set plus(const Set& a, const Set& b) const {
    Set out;
    for (auto x : a)
      for (auto y : b) out.insert(add(x, y));
    return out;
  }
  Set shift(const Set& a, std::uint32_t g) const {
    Set out;
    for (auto x : a) out.insert(add(x, g));
    return out;
  }
  Set minus(const Set& a) const {
    Set out;
    for (auto x : a) out.insert(neg(x));
    return out;
  }
  Set complement(const Set& a) const {
    Set out;
    for (std::uint32_t x = 0; x < n; ++x)
      if (!a.count(x)) out.insert(x);
    return out;
  }
  Set period(const Set& a) const {
    Set out;
    for (std::uint32_t g = 0; g < n; ++g)
      if (shift(a, g) == a) out.insert(g);
    return out;
  }
  bool closed(const Set& a) const {
    if (!a.count(0)) return false;
    for (auto x : a)
      for (auto y : a)
        if (!a.count(add(x, y))) return false;
    return true;
  }
  Set generated(const Set& seeds) const {
    Set h{0};
    for (bool grew = true; grew;) {
      grew = false;
      for (auto x : Set(h))
        for (auto s : seeds)
          if (h.insert(add(x, s)).second) grew = true;
    }
    return h;
  }
  std::vector<Set> subgroups() const {
    std::vector<Set> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      if (!(m & 1)) continue;
      Set a;
      for (std::uint32_t x = 0; x < n; ++x)
        if (m >> x & 1) a.insert(x);
      if (closed(a)) out.push_back(a);
    }
    return out;
  }

  // kappa_k by scanning every X; n - 2k + 1 when S is not k-separable.
  std::uint32_t kappa(const Set& s, unsigned k) const {
    std::uint32_t best = n - 2 * k + 1;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      Set x;
      for (std::uint32_t i = 0; i < n; ++i)
        if (m >> i & 1) x.insert(i);
      if (x.size() < k) continue;
      const Set xs = plus(x, s);
      if (n - xs.size() < k) continue;
      best = std::min<std::uint32_t>(best, xs.size() - x.size());
    }
    return best;
  }

  std::vector<Set> fragments(const Set& s, unsigned k) const {
    const std::uint32_t kap = kappa(s, k);
    std::vector<Set> out;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      Set x;
      for (std::uint32_t i = 0; i < n; ++i)
        if (m >> i & 1) x.insert(i);
      if (x.size() < k) continue;
      const Set xs = plus(x, s);
      if (n - xs.size() < k) continue;
      if (xs.size() - x.size() == kap) out.push_back(x);
    }
    return out;
  }

  // |X+S| >= min(n-1, |X|+|S|) for every X with |X| >= 2
  bool vosper(const Set& s) const {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      Set x;
      for (std::uint32_t i = 0; i < n; ++i)
        if (m >> i & 1) x.insert(i);
      if (x.size() < 2) continue;
      if (plus(x, s).size() < std::min<std::size_t>(n - 1, x.size() + s.size())) return false;
    }
    return true;
  }
};

inline Set to_set(const smallsum::SubsetMask& m) {
  const auto v = m.indices();
  return Set(v.begin(), v.end());
}

inline smallsum::SubsetMask to_mask(const smallsum::GroupSpec& g, const Set& s) {
  const std::vector<std::uint32_t> v(s.begin(), s.end());
  return smallsum::SubsetMask::from_indices(g, v);
}

inline Set from_word(std::uint64_t w) {
  Set out;
  for (std::uint32_t i = 0; i < 64; ++i)
    if (w >> i & 1) out.insert(i);
  return out;
}

}  // namespace oracle
