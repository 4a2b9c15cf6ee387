#include "smallsum/isoperimetry.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <unordered_set>

#include "smallsum/setops.hpp"

namespace smallsum {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

void check_kappa_input(const SubsetMask& s, unsigned k) {
  if (k < 1) throw Error("kappa: k must be at least 1");
  if (s.empty() || !s.contains(Element{0})) throw Error("kappa: S must contain 0");
  const std::uint64_t n = s.group().order();
  if (n + 1 < 2ull * k) {
    throw Error("kappa: group order " + std::to_string(n) + " is below 2k-1 for k=" +
                std::to_string(k));
  }
}

KappaMode resolve_mode(const SubsetMask& s, const KappaOptions& options) {
  const std::uint32_t n = s.group().order();
  const std::uint32_t limit = std::min<std::uint32_t>(options.exact_limit, 40);
  switch (options.mode) {
    case KappaMode::kExact:
      if (n > limit) {
        throw Error("exact kappa scan is limited to order " + std::to_string(limit) +
                    "; use seeded mode for order " + std::to_string(n));
      }
      return KappaMode::kExact;
    case KappaMode::kSeeded:
      return KappaMode::kSeeded;
    case KappaMode::kAuto:
      break;
  }
  return n <= limit ? KappaMode::kExact : KappaMode::kSeeded;
}

// Per-level best value and the sets realizing it, all containing 0.
struct Level {
  unsigned k = 0;
  std::uint32_t best = kNone;
  std::vector<SubsetMask> fragments;  // exact mode: every fragment through 0 (when listing)
  std::uint32_t atom_size = kNone;
  std::vector<SubsetMask> atoms;
};

void fill_report(ConnectivityReport& r, Level& level, std::uint32_t n, bool list_all,
                 bool exact) {
  r.k = level.k;
  r.exact = exact;
  if (level.best == kNone) {
    r.separable = false;
    r.kappa = n - 2 * level.k + 1;
    r.fragments_complete = exact;
    return;
  }
  r.separable = true;
  r.kappa = level.best;
  r.atom_size = level.atom_size;

  std::unordered_set<SubsetMask, SubsetMaskHash> seen;
  for (const auto& a : level.atoms) {
    SubsetMask c = canonical_translate(a);
    if (seen.insert(c).second) r.atoms.push_back(std::move(c));
  }
  std::sort(r.atoms.begin(), r.atoms.end(), lex_less);

  if (list_all) {
    std::unordered_set<SubsetMask, SubsetMaskHash> all;
    const GroupSpec& g = level.fragments.empty() ? r.atoms.front().group()
                                                 : level.fragments.front().group();
    for (const auto& f : level.fragments)
      for (std::uint32_t x = 0; x < g.order(); ++x) all.insert(f.translate(Element{x}));
    r.fragments.assign(all.begin(), all.end());
    r.fragments_complete = exact;
  } else {
    // Representatives only, one per translation class seen.
    for (const auto& f : level.fragments) r.fragments.push_back(canonical_translate(f));
    for (const auto& a : r.atoms) r.fragments.push_back(a);
    r.fragments_complete = false;
  }
  std::sort(r.fragments.begin(), r.fragments.end(), lex_less);
  r.fragments.erase(std::unique(r.fragments.begin(), r.fragments.end()), r.fragments.end());
}

// ---------------------------------------------------------------------------
// Exhaustive scan over X containing 0 (translation invariance covers the
// rest). Masks fit one word since the order is capped well below 64.

class ExactScan {
 public:
  ExactScan(const SubsetMask& s, unsigned k_lo, unsigned k_hi, bool list_all)
      : g_(s.group()), n_(g_.order()), k_lo_(k_lo), list_all_(list_all) {
    shift_.resize(n_);
    for (std::uint32_t x = 0; x < n_; ++x) shift_[x] = s.translate(Element{x}).word();
    levels_.resize(k_hi - k_lo + 1);
    for (unsigned k = k_lo; k <= k_hi; ++k) levels_[k - k_lo].k = k;
    word_levels_.resize(levels_.size());
  }

  std::vector<Level> run() {
    dfs(1, 1, shift_[0], 1);
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      for (auto w : word_levels_[i].fragments)
        levels_[i].fragments.push_back(SubsetMask::from_word(g_, w));
      for (auto w : word_levels_[i].atoms)
        levels_[i].atoms.push_back(SubsetMask::from_word(g_, w));
      levels_[i].best = word_levels_[i].best;
      levels_[i].atom_size = word_levels_[i].atom_size;
    }
    return std::move(levels_);
  }

 private:
  struct WordLevel {
    std::uint32_t best = kNone;
    std::vector<std::uint64_t> fragments;
    std::uint32_t atom_size = kNone;
    std::vector<std::uint64_t> atoms;
  };

  void record(WordLevel& lv, std::uint64_t x, std::uint32_t size, std::uint32_t b) {
    if (b > lv.best) return;
    if (b < lv.best) {
      lv.best = b;
      lv.fragments.clear();
      lv.atoms.clear();
      lv.atom_size = kNone;
    }
    if (list_all_ || lv.fragments.empty()) lv.fragments.push_back(x);
    if (size < lv.atom_size) {
      lv.atom_size = size;
      lv.atoms.clear();
    }
    if (size == lv.atom_size) lv.atoms.push_back(x);
  }

  void dfs(std::uint32_t next, std::uint64_t x, std::uint64_t sum, std::uint32_t size) {
    const std::uint32_t covered = static_cast<std::uint32_t>(std::popcount(sum));
    const std::uint32_t ext = n_ - covered;
    if (ext < k_lo_) return;  // supersets only shrink the exterior
    const std::uint32_t b = covered - size;
    const std::uint32_t top = std::min(size, ext);
    for (std::size_t i = 0; i < word_levels_.size() && k_lo_ + i <= top; ++i)
      record(word_levels_[i], x, size, b);
    for (std::uint32_t y = next; y < n_; ++y)
      dfs(y + 1, x | (std::uint64_t{1} << y), sum | shift_[y], size + 1);
  }

  GroupSpec g_;
  std::uint32_t n_;
  unsigned k_lo_;
  bool list_all_;
  std::vector<std::uint64_t> shift_;
  std::vector<Level> levels_;
  std::vector<WordLevel> word_levels_;
};

// ---------------------------------------------------------------------------
// Seeded search: structured candidates (small sets, progressions, cosets of
// subgroups extended along a progression, iterated sumsets), each also closed
// under X -> G \ ((X^S) - S), followed by local search. Gives upper bounds.

struct Bits {
  std::vector<std::uint64_t> w;

  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  bool test(std::uint32_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
  void set(std::uint32_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::uint32_t i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
    return *this;
  }
  std::uint32_t count() const {
    std::uint32_t c = 0;
    for (auto x : w) c += static_cast<std::uint32_t>(std::popcount(x));
    return c;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::uint64_t x = w[i];
      while (x) {
        f(static_cast<std::uint32_t>(i * 64 + std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }
  friend bool operator==(const Bits&, const Bits&) = default;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto x : b.w) h = (h ^ x) * 0x100000001b3ull;
    return h;
  }
};

class SeededSearch {
 public:
  SeededSearch(const SubsetMask& s, unsigned k_lo, unsigned k_hi, std::uint64_t budget)
      : s_(s), g_(s.group()), n_(g_.order()), k_lo_(k_lo), k_hi_(k_hi), budget_(budget) {
    plus_.reserve(n_);
    minus_.reserve(n_);
    const SubsetMask neg = s.negate();
    for (std::uint32_t x = 0; x < n_; ++x) {
      plus_.push_back(to_bits(s.translate(Element{x})));
      minus_.push_back(to_bits(neg.translate(Element{x})));
    }
    levels_.resize(k_hi - k_lo + 1);
    for (unsigned k = k_lo; k <= k_hi; ++k) levels_[k - k_lo].k = k;
  }

  std::vector<Level> run() {
    small_sets();
    progressions();
    coset_progressions();
    iterated_sumsets();
    local_search();
    shrink_atoms();

    std::vector<Level> out(levels_.size());
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      out[i].k = levels_[i].k;
      out[i].best = levels_[i].best;
      out[i].atom_size = levels_[i].atom_size;
      for (const auto& f : levels_[i].fragments) out[i].fragments.push_back(to_mask(f));
      for (const auto& a : levels_[i].atoms) out[i].atoms.push_back(to_mask(a));
    }
    return out;
  }

 private:
  struct BitsLevel {
    unsigned k = 0;
    std::uint32_t best = kNone;
    std::vector<Bits> fragments;  // a few, for local search and atoms
    std::uint32_t atom_size = kNone;
    std::vector<Bits> atoms;
  };
  static constexpr std::size_t kKeep = 24;

  Bits to_bits(const SubsetMask& m) const {
    Bits b(n_);
    m.for_each([&](Element x) { b.set(x.idx); });
    return b;
  }
  SubsetMask to_mask(const Bits& b) const {
    SubsetMask m(g_);
    b.for_each([&](std::uint32_t x) { m.insert(Element{x}); });
    return m;
  }

  Bits sum_of(const Bits& x) {
    Bits sum(n_);
    x.for_each([&](std::uint32_t y) { sum |= plus_[y]; });
    ++spent_;
    return sum;
  }

  // Translate so that the set contains 0 at its smallest element.
  Bits through_zero(const Bits& x) const {
    std::uint32_t lo = kNone;
    x.for_each([&](std::uint32_t y) { lo = std::min(lo, y); });
    if (lo == 0 || lo == kNone) return x;
    Bits out(n_);
    const Element shift = g_.neg(Element{lo});
    x.for_each([&](std::uint32_t y) { out.set(g_.add(Element{y}, shift).idx); });
    return out;
  }

  void record(const Bits& x, std::uint32_t size, std::uint32_t covered) {
    const std::uint32_t ext = n_ - covered;
    const std::uint32_t b = covered - size;
    for (auto& lv : levels_) {
      if (size < lv.k || ext < lv.k || b > lv.best) continue;
      if (b < lv.best) {
        lv.best = b;
        lv.fragments.clear();
        lv.atoms.clear();
        lv.atom_size = kNone;
      }
      const Bits z = through_zero(x);
      if (lv.fragments.size() < kKeep &&
          std::find(lv.fragments.begin(), lv.fragments.end(), z) == lv.fragments.end())
        lv.fragments.push_back(z);
      if (size < lv.atom_size) {
        lv.atom_size = size;
        lv.atoms.clear();
      }
      if (size == lv.atom_size &&
          std::find(lv.atoms.begin(), lv.atoms.end(), z) == lv.atoms.end())
        lv.atoms.push_back(z);
    }
  }

  // Records X and its closure; `sum` must equal X + S.
  void consider(const Bits& x, std::uint32_t size, const Bits& sum) {
    const std::uint32_t covered = sum.count();
    if (n_ - covered < k_lo_) return;
    record(x, size, covered);
    // cl(X) = G \ ((X^S) - S) contains X and has the same sumset.
    Bits reach(n_);
    for (std::uint32_t y = 0; y < n_; ++y)
      if (!sum.test(y)) reach |= minus_[y];
    Bits cl(n_);
    for (std::size_t i = 0; i < cl.w.size(); ++i) cl.w[i] = ~reach.w[i];
    if (n_ % 64) cl.w.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    ++spent_;
    const std::uint32_t cl_size = cl.count();
    if (cl_size != size) record(cl, cl_size, covered);
  }

  bool exhausted() const { return spent_ >= budget_; }

  void small_sets() {
    // Sets through 0 of size <= k_hi + 1, smallest sizes first so that a
    // tight budget still settles separability at size k.
    for (std::uint32_t limit = 1; limit <= k_hi_ + 1 && limit <= n_; ++limit) {
      Bits x(n_);
      x.set(0);
      small_dfs(1, x, plus_[0], 1, limit);
      if (exhausted()) return;
    }
  }

  void small_dfs(std::uint32_t next, Bits& x, const Bits& sum, std::uint32_t size,
                 std::uint32_t limit) {
    if (exhausted()) return;
    if (size == limit) {
      consider(x, size, sum);
      return;
    }
    if (n_ - sum.count() < k_lo_) return;
    for (std::uint32_t y = next; y < n_; ++y) {
      Bits grown = sum;
      grown |= plus_[y];
      x.set(y);
      small_dfs(y + 1, x, grown, size + 1, limit);
      x.reset(y);
      if (exhausted()) return;
    }
  }

  void progressions() {
    for (std::uint32_t r = 1; r < n_ && !exhausted(); ++r) {
      if (g_.neg(Element{r}).idx < r) continue;  // r and -r give translates
      Bits x(n_);
      Bits sum(n_);
      Element cur{0};
      for (std::uint32_t len = 1; len < n_; ++len) {
        if (x.test(cur.idx)) break;
        x.set(cur.idx);
        sum |= plus_[cur.idx];
        ++spent_;
        if (len >= 2) consider(x, len, sum);
        if (n_ - sum.count() < k_lo_) break;
        cur = g_.add(cur, Element{r});
      }
    }
  }

  void coset_progressions() {
    if (n_ > 4096) return;
    const auto subgroups = cached_subgroups(g_);
    for (const auto& h : *subgroups) {
      if (h.is_trivial() || h.is_whole() || exhausted()) continue;
      const Bits hb = to_bits(h.members);
      Bits hsum(n_);
      h.members.for_each([&](Element y) { hsum |= plus_[y.idx]; });
      consider(hb, h.order(), hsum);
      // H + {0, d, 2d, ...} for one d per nonzero coset of H.
      SubsetMask covered = h.members;
      for (std::uint32_t d = 1; d < n_ && !exhausted(); ++d) {
        if (covered.contains(Element{d})) continue;
        covered |= h.members.translate(Element{d});
        Bits x = hb;
        Bits sum = hsum;
        std::uint32_t size = h.order();
        Element step{d};
        while (!h.members.contains(step)) {
          h.members.translate(step).for_each([&](Element y) {
            x.set(y.idx);
            sum |= plus_[y.idx];
          });
          size += h.order();
          ++spent_;
          if (n_ - sum.count() < k_lo_) break;
          consider(x, size, sum);
          step = g_.add(step, Element{d});
        }
      }
    }
  }

  void iterated_sumsets() {
    Bits x(n_);
    x.set(0);
    for (std::uint32_t j = 0; j < n_ && !exhausted(); ++j) {
      const Bits sum = sum_of(x);
      if (n_ - sum.count() < k_lo_ || sum == x) break;
      consider(x, x.count(), sum);
      x = sum;
    }
  }

  // Steepest descent over single-element additions and removals, allowing a
  // bounded number of sideways moves that shrink the set.
  void local_search() {
    for (std::size_t li = 0; li < levels_.size(); ++li) {
      std::vector<Bits> starts = levels_[li].fragments;
      for (const auto& start : starts) {
        if (exhausted()) return;
        descend(li, start);
      }
    }
  }

  void descend(std::size_t li, Bits x) {
    const unsigned k = levels_[li].k;
    std::unordered_set<Bits, BitsHash> visited;
    Bits sum = sum_of(x);
    std::uint32_t size = x.count();
    std::uint32_t value = sum.count() - size;
    for (int round = 0; round < static_cast<int>(2 * n_) && !exhausted(); ++round) {
      visited.insert(x);
      std::uint32_t best_value = kNone;
      std::uint32_t best_size = kNone;
      Bits best_x(n_);
      Bits best_sum(n_);
      auto try_move = [&](const Bits& cand, const Bits& cand_sum, std::uint32_t cand_size) {
        const std::uint32_t covered = cand_sum.count();
        if (cand_size < k || n_ - covered < k) return;
        const std::uint32_t v = covered - cand_size;
        if (v < best_value || (v == best_value && cand_size < best_size)) {
          if (visited.count(cand)) return;
          best_value = v;
          best_size = cand_size;
          best_x = cand;
          best_sum = cand_sum;
        }
      };
      for (std::uint32_t y = 0; y < n_; ++y) {
        if (x.test(y)) {
          if (size <= 1) continue;
          Bits cand = x;
          cand.reset(y);
          try_move(cand, sum_of(cand), size - 1);
        } else if (sum.test(y)) {
          Bits cand = x;
          cand.set(y);
          Bits cand_sum = sum;
          cand_sum |= plus_[y];
          try_move(cand, cand_sum, size + 1);
        }
      }
      if (best_value == kNone) return;
      if (best_value > value || (best_value == value && best_size >= size)) return;
      x = best_x;
      sum = best_sum;
      size = best_size;
      value = best_value;
      consider(x, size, sum);
    }
  }

  // Remove elements from fragments while they stay fragments.
  void shrink_atoms() {
    for (auto& lv : levels_) {
      if (lv.best == kNone) continue;
      std::vector<Bits> pool = lv.fragments;
      pool.insert(pool.end(), lv.atoms.begin(), lv.atoms.end());
      for (Bits x : pool) {
        bool changed = true;
        while (changed && !exhausted()) {
          changed = false;
          const std::uint32_t size = x.count();
          if (size <= lv.k) break;
          for (std::uint32_t y = 0; y < n_ && !changed; ++y) {
            if (!x.test(y)) continue;
            Bits cand = x;
            cand.reset(y);
            const Bits sum = sum_of(cand);
            const std::uint32_t covered = sum.count();
            if (n_ - covered >= lv.k && covered - (size - 1) == lv.best) {
              x = cand;
              changed = true;
              record(x, size - 1, covered);
            }
          }
        }
      }
    }
  }

  const SubsetMask& s_;
  GroupSpec g_;
  std::uint32_t n_;
  unsigned k_lo_;
  unsigned k_hi_;
  std::uint64_t budget_;
  std::uint64_t spent_ = 0;
  std::vector<Bits> plus_;
  std::vector<Bits> minus_;
  std::vector<BitsLevel> levels_;
};

std::vector<ConnectivityReport> run_levels(const SubsetMask& s, unsigned k_lo, unsigned k_hi,
                                           const KappaOptions& options) {
  const KappaMode mode = resolve_mode(s, options);
  const std::uint32_t n = s.group().order();
  const bool list_all = mode == KappaMode::kExact && n <= options.list_limit;
  std::vector<Level> levels = mode == KappaMode::kExact
                                  ? ExactScan(s, k_lo, k_hi, list_all).run()
                                  : SeededSearch(s, k_lo, k_hi, options.seeded_budget).run();
  std::vector<ConnectivityReport> out(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out[i].mode = mode;
    fill_report(out[i], levels[i], n, list_all, mode == KappaMode::kExact);
  }
  return out;
}

bool is_subgroup_fragment(const Subgroup& h, const SubsetMask& s, unsigned k,
                          std::uint32_t kappa_k) {
  const std::uint32_t n = s.group().order();
  if (h.order() < k) return false;
  const std::uint32_t covered = sumset(h.members, s).size();
  return n - covered >= k && covered - h.order() == kappa_k;
}

}  // namespace

const char* to_string(KappaMode mode) {
  switch (mode) {
    case KappaMode::kAuto: return "auto";
    case KappaMode::kExact: return "exact";
    case KappaMode::kSeeded: return "seeded";
  }
  return "?";
}

KappaMode parse_kappa_mode(const std::string& name) {
  if (name == "auto") return KappaMode::kAuto;
  if (name == "exact") return KappaMode::kExact;
  if (name == "seeded") return KappaMode::kSeeded;
  throw Error("unknown kappa mode '" + name + "' (expected exact, seeded or auto)");
}

const char* to_string(SuperAtom::Kind kind) {
  return kind == SuperAtom::Kind::kGeneratedSubgroup ? "generated_subgroup" : "hyper_atom";
}

SubsetMask canonical_translate(const SubsetMask& x) {
  if (x.empty()) throw Error("canonical_translate: empty set");
  const GroupSpec& g = x.group();
  SubsetMask best;
  bool have = false;
  x.for_each([&](Element y) {
    SubsetMask t = x.translate(g.neg(y));
    if (!have || lex_less(t, best)) {
      best = std::move(t);
      have = true;
    }
  });
  return best;
}

ConnectivityReport kappa(const SubsetMask& s, unsigned k, const KappaOptions& options) {
  check_kappa_input(s, k);
  return std::move(run_levels(s, k, k, options).front());
}

std::vector<ConnectivityReport> kappa_profile(const SubsetMask& s, unsigned k_max,
                                              const KappaOptions& options) {
  check_kappa_input(s, 1);
  const std::uint32_t n = s.group().order();
  const unsigned top = std::min<unsigned>(k_max, (n + 1) / 2);
  if (top < 1) return {};
  return run_levels(s, 1, top, options);
}

std::vector<Subgroup> subgroup_fragments(const SubsetMask& s, unsigned k,
                                         const KappaOptions& options) {
  const ConnectivityReport r = kappa(s, k, options);
  std::vector<Subgroup> out;
  if (!r.separable) return out;
  for (const auto& h : *cached_subgroups(s.group()))
    if (is_subgroup_fragment(h, s, k, r.kappa)) out.push_back(h);
  return out;
}

DegeneracyResult is_degenerate(const SubsetMask& s, const KappaOptions& options) {
  DegeneracyResult out;
  if (s.group().order() < 3) {
    if (s.empty() || !s.contains(Element{0})) throw Error("kappa: S must contain 0");
    return out;
  }
  const ConnectivityReport r = kappa(s, 2, options);
  out.kappa2 = r.kappa;
  if (!r.separable) return out;
  out.status = Degeneracy::kNonDegenerate;
  for (const auto& h : *cached_subgroups(s.group())) {
    if (is_subgroup_fragment(h, s, 2, r.kappa)) {
      out.status = Degeneracy::kDegenerate;
      out.subgroup = h;
      break;
    }
  }
  return out;
}

namespace {

std::optional<HyperAtom> hyper_atom_from(const std::vector<Subgroup>& frags) {
  if (frags.empty()) return std::nullopt;
  const Subgroup* best = &frags.front();
  for (const auto& h : frags) {
    if (h.order() > best->order() ||
        (h.order() == best->order() && lex_less(h.members, best->members)))
      best = &h;
  }
  std::size_t maximal = 0;
  for (const auto& h : frags) {
    bool contained = false;
    for (const auto& other : frags)
      if (other.order() > h.order() && h.members.is_subset_of(other.members)) contained = true;
    if (!contained) ++maximal;
  }
  return HyperAtom{*best, maximal == 1};
}

}  // namespace

HyperAtom hyper_atom(const SubsetMask& s, const KappaOptions& options) {
  if (s.group().order() < 3) throw Error("hyper_atom: S is not 2-separable");
  const auto frags = subgroup_fragments(s, 2, options);
  auto h = hyper_atom_from(frags);
  if (!h) throw Error("hyper_atom: S is not degenerate");
  return *h;
}

std::optional<SuperAtom> find_super_atom(const SubsetMask& s, const KappaOptions& options) {
  if (s.empty()) throw Error("super_atom: empty set");
  const SubsetMask star = normalize(s).first;
  Subgroup gen = subgroup_generated(s.group(), star);
  if (!gen.is_whole()) return SuperAtom{std::move(gen), SuperAtom::Kind::kGeneratedSubgroup};
  if (s.group().order() < 3) return std::nullopt;
  const auto frags = subgroup_fragments(star, 2, options);
  auto h = hyper_atom_from(frags);
  if (!h) return std::nullopt;
  return SuperAtom{std::move(h->subgroup), SuperAtom::Kind::kHyperAtom};
}

SuperAtom super_atom(const SubsetMask& s, const KappaOptions& options) {
  auto a = find_super_atom(s, options);
  if (!a) throw Error("no super-atom");
  return *a;
}

std::vector<SubsetMask> negative_fragments(const SubsetMask& s, unsigned k,
                                           const KappaOptions& options) {
  return kappa(s.negate(), k, options).fragments;
}

std::vector<SubsetMask> coset_parts(const SubsetMask& a, const Subgroup& h) {
  const GroupSpec& g = a.group();
  std::vector<SubsetMask> parts;
  SubsetMask seen(g);
  if (a.intersects(h.members)) {
    parts.push_back(a & h.members);
    seen |= h.members;
  }
  a.for_each([&](Element x) {
    if (seen.contains(x)) return;
    const SubsetMask coset = h.members.translate(x);
    seen |= coset;
    parts.push_back(a & coset);
  });
  return parts;
}

namespace {

void check_matching_input(const SubsetMask& t, const SubsetMask& s, const Subgroup& h) {
  const GroupSpec& g = s.group();
  if (!(t.group() == g) || !(h.members.group() == g))
    throw Error("find_matching: sets from different groups");
  if (t.empty()) throw Error("find_matching: T is empty");
  if (!s.contains(Element{0})) throw Error("find_matching: S must contain 0");
  if (h.order() < 2 || g.order() < 3) throw Error("find_matching: H is not a 2-fragment of S");
}

MatchingAssignment matching_with(const SubsetMask& t, const SubsetMask& s, const Subgroup& h,
                                 const ConnectivityReport& r) {
  const GroupSpec& g = s.group();
  if (!r.separable || !is_subgroup_fragment(h, s, 2, r.kappa))
    throw Error("find_matching: H is not a 2-fragment of S");

  MatchingAssignment out;
  out.h = h;
  out.s_parts = coset_parts(s, h);
  out.t_parts = coset_parts(t, h);
  const std::size_t u = out.s_parts.size() - 1;
  const std::size_t tt = out.t_parts.size() - 1;
  if (static_cast<std::uint64_t>(g.order()) < (tt + u + 1) * std::uint64_t{h.order()}) {
    throw Error("find_matching: |G| < (t+u+1)|H|");
  }

  const Morphism phi = quotient(g, h);
  const std::uint32_t q = phi.target.order();
  const SubsetMask used = phi.image(t);
  std::vector<std::uint32_t> s_coset(u + 1);
  std::vector<std::uint32_t> t_coset(tt + 1);
  for (std::size_t j = 0; j <= u; ++j) s_coset[j] = phi.apply(out.s_parts[j].min_element()).idx;
  for (std::size_t i = 0; i <= tt; ++i) t_coset[i] = phi.apply(out.t_parts[i].min_element()).idx;

  // edge i -> coset c, labelled by the smallest j with phi(T_i)+phi(S_j) = c
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges(tt + 1);
  for (std::size_t i = 0; i <= tt; ++i) {
    std::vector<bool> hit(q, false);
    for (std::size_t j = 0; j <= u; ++j) {
      const std::uint32_t c = phi.target.add(Element{t_coset[i]}, Element{s_coset[j]}).idx;
      if (used.contains(Element{c}) || hit[c]) continue;
      hit[c] = true;
      edges[i].push_back({c, static_cast<std::uint32_t>(j)});
    }
  }

  std::vector<std::int64_t> owner(q, -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment =
      [&](std::size_t i, std::vector<bool>& visited) {
        for (auto [c, j] : edges[i]) {
          if (visited[c]) continue;
          visited[c] = true;
          if (owner[c] < 0 || augment(static_cast<std::size_t>(owner[c]), visited)) {
            owner[c] = static_cast<std::int64_t>(i);
            return true;
          }
        }
        return false;
      };
  for (std::size_t i = 0; i <= tt; ++i) {
    std::vector<bool> visited(q, false);
    augment(i, visited);
  }
  for (std::uint32_t c = 0; c < q; ++c) {
    if (owner[c] < 0) continue;
    const auto i = static_cast<std::uint32_t>(owner[c]);
    for (auto [cc, j] : edges[i])
      if (cc == c) out.assignment[i] = j;
    out.matched.push_back(i);
  }
  std::sort(out.matched.begin(), out.matched.end());
  out.meets_bound = out.matched.size() >= std::min<std::size_t>(u, tt + 1);
  return out;
}

}  // namespace

MatchingAssignment find_matching(const SubsetMask& t, const SubsetMask& s, const Subgroup& h,
                                 const KappaOptions& options) {
  check_matching_input(t, s, h);
  return matching_with(t, s, h, kappa(s, 2, options));
}

// ---------------------------------------------------------------------------

Workspace::Entry& Workspace::entry(const SubsetMask& s) { return entries_[s]; }

const ConnectivityReport& Workspace::kappa(const SubsetMask& s, unsigned k) {
  Entry& e = entry(s);
  if (e.profile.size() < k) {
    check_kappa_input(s, k);
    e.profile = kappa_profile(s, std::max(k, 4u), options_);
  }
  return e.profile[k - 1];
}

const DegeneracyResult& Workspace::degeneracy(const SubsetMask& s) {
  Entry& e = entry(s);
  if (!e.degeneracy) {
    DegeneracyResult out;
    if (s.group().order() < 3) {
      check_kappa_input(s, 1);
    } else {
      const ConnectivityReport& r = kappa(s, 2);
      out.kappa2 = r.kappa;
      if (r.separable) {
        out.status = Degeneracy::kNonDegenerate;
        for (const auto& h : subgroups(s.group())) {
          if (is_subgroup_fragment(h, s, 2, r.kappa)) {
            out.status = Degeneracy::kDegenerate;
            out.subgroup = h;
            break;
          }
        }
      }
    }
    entry(s).degeneracy = std::move(out);
  }
  return *entry(s).degeneracy;
}

const std::optional<HyperAtom>& Workspace::hyper_atom(const SubsetMask& s) {
  if (!entry(s).hyper_done) {
    std::optional<HyperAtom> h;
    if (degeneracy(s).status == Degeneracy::kDegenerate) {
      const std::uint32_t k2 = kappa(s, 2).kappa;
      std::vector<Subgroup> frags;
      for (const auto& sub : subgroups(s.group()))
        if (is_subgroup_fragment(sub, s, 2, k2)) frags.push_back(sub);
      h = hyper_atom_from(frags);
    }
    Entry& e = entry(s);
    e.hyper = std::move(h);
    e.hyper_done = true;
  }
  return entry(s).hyper;
}

const std::optional<SuperAtom>& Workspace::super_atom(const SubsetMask& s) {
  if (!entry(s).super_done) {
    if (s.empty()) throw Error("super_atom: empty set");
    std::optional<SuperAtom> out;
    const SubsetMask star = normalize(s).first;
    Subgroup gen = subgroup_generated(s.group(), star);
    if (!gen.is_whole()) {
      out = SuperAtom{std::move(gen), SuperAtom::Kind::kGeneratedSubgroup};
    } else if (s.group().order() >= 3) {
      if (const auto& h = hyper_atom(star))
        out = SuperAtom{h->subgroup, SuperAtom::Kind::kHyperAtom};
    }
    Entry& e = entry(s);
    e.super = std::move(out);
    e.super_done = true;
  }
  return entry(s).super;
}

const Morphism& Workspace::quotient(const Subgroup& h) {
  auto it = quotients_.find(h.members);
  if (it == quotients_.end())
    it = quotients_.emplace(h.members, smallsum::quotient(h.members.group(), h)).first;
  return it->second;
}

const std::vector<Subgroup>& Workspace::subgroups(const GroupSpec& g) {
  auto& slot = subgroups_[g.factors()];
  if (!slot) slot = cached_subgroups(g);
  return *slot;
}

MatchingAssignment Workspace::matching(const SubsetMask& t, const SubsetMask& s,
                                       const Subgroup& h) {
  check_matching_input(t, s, h);
  return matching_with(t, s, h, kappa(s, 2));
}

void Workspace::clear() {
  entries_.clear();
  quotients_.clear();
}

}  // namespace smallsum
