#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smallsum/isoperimetry.hpp"
#include "smallsum/structure.hpp"

namespace smallsum {

enum class TheoremId {
  k3x3,         // two 3-sets with |S+T| = 6 - mu
  kTwoThird,    // degenerate S, |S+T| <= (2|G| + 2mu)/3
  kModular,     // same hypotheses, quotient-level conclusion
  kNear,        // non-degenerate S is an (r, mu-1)-progression
  kN4,          // |S+T| <= |G| - 4 + 2mu
  kN3,          // |S+T| <= |G| - 3 - mu
  kKemperman,   // |A+B| = |A| + |B| - 1 <= |G| - 2
  kGrynkiewicz  // |A+B| = |A| + |B| <= |G| - 3
};

const std::vector<TheoremId>& all_classifiers();
const char* to_string(TheoremId id);
std::optional<TheoremId> parse_theorem(const std::string& name);

/// S, T and mu. Single-set statements leave T empty; the Kemperman and
/// Grynkiewicz statements read (A, B) as (S, T) and ignore mu.
struct PairInstance {
  GroupSpec group;
  SubsetMask s;
  SubsetMask t;
  int mu = 0;
};

/// One satisfied case with the data needed to re-check it.
struct CaseWitness {
  std::string label;
  std::optional<Subgroup> h;
  /// How H was found: hyper_atom, super_atom_S, super_atom_TS,
  /// other_subgroup, whole_group or searched.
  std::string h_role;
  std::optional<EssentialPairWitness> essential;
  /// Decompositions whose last parts are S_u and T_t.
  std::optional<HDecomposition> s_decomp;
  std::optional<HDecomposition> t_decomp;
  /// Progression witnesses, in G or (when `quotient_level`) in G/H.
  std::optional<ProgressionWitness> s_prog;
  std::optional<ProgressionWitness> t_prog;
  bool quotient_level = false;
  std::optional<Element> a;
  std::optional<Element> b;
  /// Which set is the progression (3x3), translate or complement branch.
  std::string branch;
  std::optional<std::uint32_t> nu;
  /// "S" when S \ S_u is H-periodic and T \ T_t is (H,-nu)-periodic, "T"
  /// for the reverse.
  std::string periodic_side;
  std::optional<QuasiPeriodicPartition> a_part;
  std::optional<QuasiPeriodicPartition> b_part;
  std::map<std::string, std::int64_t> facts;
};

struct StructureVerdict {
  TheoremId theorem = TheoremId::k3x3;
  PairInstance instance;
  /// Every satisfied case, in statement order.
  std::vector<CaseWitness> cases;
  std::string principal;
  /// An independent re-check confirmed every reported case and found no
  /// case the classifier missed.
  bool verified = false;
  /// Hypotheses hold but no case does, or the re-check failed.
  bool counterexample = false;
  std::string failed_clause;
};

/// The first hypothesis clause the instance violates, cheapest checks first;
/// nullopt when all hold.
std::optional<std::string> hypothesis_failure(TheoremId id, const PairInstance& inst,
                                              Workspace& ws);

/// Throws HypothesisError naming the failed clause.
void require_hypotheses(TheoremId id, const PairInstance& inst, Workspace& ws);

/// Runs the case search and the independent re-check; hypotheses must hold
/// (throws HypothesisError otherwise).
StructureVerdict classify(TheoremId id, const PairInstance& inst, Workspace& ws);
StructureVerdict classify(TheoremId id, const PairInstance& inst);

/// The case search alone, for instances already known to satisfy the
/// hypotheses. Leaves `verified` unset.
StructureVerdict find_cases(TheoremId id, const PairInstance& inst, Workspace& ws);

StructureVerdict classify_3x3(const PairInstance& inst);
StructureVerdict classify_two_third(const PairInstance& inst);
StructureVerdict classify_modular(const PairInstance& inst);
StructureVerdict classify_near_progression(const SubsetMask& s, int mu);
StructureVerdict classify_n_minus_4(const PairInstance& inst);
StructureVerdict classify_n_minus_3(const PairInstance& inst);
StructureVerdict kemperman_partition(const SubsetMask& a, const SubsetMask& b);
StructureVerdict grynkiewicz_classify(const SubsetMask& a, const SubsetMask& b);

/// Candidate subgroups for the "H is a super-atom of S or T^S" clauses, with
/// their roles. At order 12 every other subgroup follows (proper ones first,
/// G last).
std::vector<std::pair<Subgroup, std::string>> super_atom_candidates(const SubsetMask& s,
                                                                    const SubsetMask& t,
                                                                    Workspace& ws);

}  // namespace smallsum
