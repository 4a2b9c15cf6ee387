#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "smallsum/isoperimetry.hpp"
#include "smallsum/subgroup.hpp"
#include "smallsum/subset.hpp"

namespace smallsum {

/// {start + i*r : 0 <= i < length} with `deleted` removed.
///
/// A singleton is a progression of every difference; it is reported once
/// with `wildcard` set. `wraps` marks the boundary case length == ord(r),
/// where the progression is a whole coset of <r> and the start is arbitrary.
struct ProgressionWitness {
  bool wildcard = false;
  Element difference{0};
  Element start{0};
  std::uint32_t length = 0;
  std::vector<Element> deleted;
  bool wraps = false;

  unsigned j() const noexcept { return static_cast<unsigned>(deleted.size()); }
};

SubsetMask reconstruct(const GroupSpec& g, const ProgressionWitness& w);

/// Every (r,-j) witness of `a` with j <= j_max, one r per pair {r, -r}
/// (the one with the smaller index). Empty for the empty set.
std::vector<ProgressionWitness> detect_progression(const SubsetMask& a, unsigned j_max);

/// A witness that `a` is an (r,-j)-progression for exactly this j, with
/// difference r or -r when `difference` is given. Singletons always match.
std::optional<ProgressionWitness> find_progression(const SubsetMask& a, unsigned j,
                                                   std::optional<Element> difference = {});

/// True for (r,0)-progressions, singletons included.
bool is_progression(const SubsetMask& a);

/// Witnesses that `a` and `b` are (r,-j_a)- and (r,-j_b)-progressions for a
/// common r (up to sign).
std::optional<std::pair<ProgressionWitness, ProgressionWitness>> common_progression(
    const SubsetMask& a, unsigned j_a, const SubsetMask& b, unsigned j_b);

/// The nonempty intersections of a set with the cosets of H.
///
/// When `is_progression` holds, consecutive parts satisfy
/// phi(part_{i+1}) = phi(part_i) + difference, the difference living in the
/// quotient group.
struct HDecomposition {
  Subgroup h;
  std::vector<SubsetMask> parts;
  std::vector<Element> cosets;  // phi(part_i) in the quotient
  bool is_progression = false;
  bool wildcard = false;  // a single part: a progression of every difference
  Element difference{0};

  std::size_t last() const noexcept { return parts.size() - 1; }
};

/// Parts in progression order (smallest canonical difference, then smallest
/// start) when phi(A) is a progression, otherwise in coset-rank order.
HDecomposition h_decompose(const SubsetMask& a, const Subgroup& h);
HDecomposition h_decompose(const SubsetMask& a, const Morphism& phi);

/// Every ordering of the H-decomposition of `a` that is an H-progression:
/// both orientations and, when phi(A) wraps, every starting coset.
std::vector<HDecomposition> h_progressions(const SubsetMask& a, const Morphism& phi);

/// Two orderings share a difference when the differences are equal or one
/// side is a wildcard.
bool same_difference(const HDecomposition& a, const HDecomposition& b);

enum class EssentialKind { kI = 1, kII = 2, kIII = 3 };
const char* to_string(EssentialKind kind);

struct EssentialPairWitness {
  Subgroup h;
  EssentialKind kind = EssentialKind::kI;
  HDecomposition s_decomp;
  HDecomposition t_decomp;
  std::optional<Subgroup> k0;  // kind iii
  std::optional<Subgroup> k1;
};

/// The H-essential pair structure of {S,T} with the smallest kind, or
/// nullopt. With `only`, just that kind is tried.
std::optional<EssentialPairWitness> classify_essential_pair(
    const SubsetMask& s, const SubsetMask& t, const Subgroup& h,
    std::optional<EssentialKind> only = {});
std::optional<EssentialPairWitness> classify_essential_pair(
    const SubsetMask& s, const SubsetMask& t, const Morphism& phi,
    std::optional<EssentialKind> only = {});

/// |X + S| >= min(|G| - 1, |X| + |S|) for every X with |X| >= 2. Translation
/// invariant, so S need not contain 0.
bool is_vosper(const SubsetMask& s, const KappaOptions& options = {});

struct QuasiPeriodicPartition {
  Subgroup h;
  SubsetMask a0;  // H-periodic, possibly empty
  SubsetMask a1;  // nonempty, inside one H-coset
};

/// Every split A = A0 u A1 with A1 the trace of one coset and A0 H-periodic,
/// ordered by the coset rank of A1.
std::vector<QuasiPeriodicPartition> quasi_periodic_partitions(const SubsetMask& a,
                                                              const Subgroup& h);

/// X is obtained by deleting nu elements from an H-periodic set.
bool is_h_minus_periodic(const SubsetMask& x, const Subgroup& h, std::uint32_t nu);

}  // namespace smallsum
