#pragma once

#include <utility>

#include "smallsum/subgroup.hpp"
#include "smallsum/subset.hpp"

namespace smallsum {

/// A + B. Empty when either side is empty.
SubsetMask sumset(const SubsetMask& a, const SubsetMask& b);

/// A - B.
SubsetMask difference_set(const SubsetMask& a, const SubsetMask& b);

/// k-fold sum A + ... + A (k >= 1).
SubsetMask multiple_sumset(const SubsetMask& a, unsigned k);

/// (X + S) \ X.
SubsetMask boundary(const SubsetMask& s, const SubsetMask& x);

/// G \ (X + S), always relative to the ambient group of X.
SubsetMask exterior(const SubsetMask& s, const SubsetMask& x);

/// Stabilizer {g : A + g = A}. Throws Error on the empty set.
Subgroup period(const SubsetMask& a);

bool is_aperiodic(const SubsetMask& a);

/// X + H == X. The empty set is H-periodic.
bool is_periodic_by(const SubsetMask& x, const Subgroup& h);

/// X^* = X - min(X), together with the translation min(X).
std::pair<SubsetMask, Element> normalize(const SubsetMask& x);

/// True when the translate of S through 0 generates the ambient group.
bool is_generating(const SubsetMask& s);

}  // namespace smallsum
