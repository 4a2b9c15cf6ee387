#include "smallsum/setops.hpp"

namespace smallsum {

SubsetMask sumset(const SubsetMask& a, const SubsetMask& b) {
  if (!(a.group() == b.group())) {
    throw Error("sumset of subsets of different groups (" + a.group().to_string() + " vs " +
                b.group().to_string() + ")");
  }
  const SubsetMask& small = a.size() <= b.size() ? a : b;
  const SubsetMask& large = a.size() <= b.size() ? b : a;
  SubsetMask out(a.group());
  small.for_each([&](Element x) {
    if (out.size() < out.group().order()) out |= large.translate(x);
  });
  return out;
}

SubsetMask difference_set(const SubsetMask& a, const SubsetMask& b) { return sumset(a, b.negate()); }

SubsetMask multiple_sumset(const SubsetMask& a, unsigned k) {
  if (k == 0) throw Error("multiple_sumset needs k >= 1");
  SubsetMask out = a;
  for (unsigned i = 1; i < k; ++i) out = sumset(out, a);
  return out;
}

SubsetMask boundary(const SubsetMask& s, const SubsetMask& x) { return sumset(x, s) - x; }

SubsetMask exterior(const SubsetMask& s, const SubsetMask& x) {
  if (x.empty()) return SubsetMask::full(x.group());
  return sumset(x, s).complement();
}

Subgroup period(const SubsetMask& a) {
  if (a.empty()) throw Error("period of the empty set is undefined");
  const GroupSpec& g = a.group();
  const Element a0 = a.min_element();
  SubsetMask stab(g);
  a.for_each([&](Element x) {
    const Element shift = g.sub(x, a0);
    if (a.translate(shift) == a) stab.insert(shift);
  });
  return as_subgroup(stab);
}

bool is_aperiodic(const SubsetMask& a) { return period(a).is_trivial(); }

bool is_periodic_by(const SubsetMask& x, const Subgroup& h) { return sumset(x, h.members) == x || x.empty(); }

std::pair<SubsetMask, Element> normalize(const SubsetMask& x) {
  if (x.empty()) throw Error("cannot normalize the empty set");
  const Element m = x.min_element();
  return {x.translate(x.group().neg(m)), m};
}

bool is_generating(const SubsetMask& s) {
  if (s.empty()) return s.group().order() == 1;
  return subgroup_generated(s.group(), normalize(s).first).is_whole();
}

}  // namespace smallsum
