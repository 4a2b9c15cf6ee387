#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smallsum/subgroup.hpp"
#include "smallsum/subset.hpp"

namespace smallsum {

enum class KappaMode {
  kAuto,    // exact when the order allows it, seeded otherwise
  kExact,   // full scan over every X containing 0
  kSeeded,  // structured candidates plus local search; an upper bound on kappa
};

const char* to_string(KappaMode mode);
KappaMode parse_kappa_mode(const std::string& name);

struct KappaOptions {
  KappaMode mode = KappaMode::kAuto;
  /// Largest order scanned exhaustively.
  std::uint32_t exact_limit = 24;
  /// Up to this order every fragment is listed, above it only the atoms.
  std::uint32_t list_limit = 16;
  /// Candidate evaluations allowed in seeded mode.
  std::uint64_t seeded_budget = 4'000'000;
};

/// kappa_k(S) together with the sets realizing it.
///
/// When S is not k-separable, kappa = n - 2k + 1 and no fragments are listed.
/// `atoms` holds one representative per translation class, chosen as the
/// lex-smallest translate containing 0.
struct ConnectivityReport {
  unsigned k = 1;
  std::uint32_t kappa = 0;
  bool separable = false;
  KappaMode mode = KappaMode::kExact;
  bool exact = true;
  bool fragments_complete = false;
  std::vector<SubsetMask> fragments;
  std::vector<SubsetMask> atoms;
  std::uint32_t atom_size = 0;
};

/// kappa_k(S). S must contain 0 and the group must have order >= 2k - 1.
ConnectivityReport kappa(const SubsetMask& s, unsigned k, const KappaOptions& options = {});

/// kappa_1 .. kappa_{k_max} from a single scan. Levels whose k violates
/// n >= 2k - 1 are omitted.
std::vector<ConnectivityReport> kappa_profile(const SubsetMask& s, unsigned k_max,
                                              const KappaOptions& options = {});

/// Lex-smallest translate of X that contains 0.
SubsetMask canonical_translate(const SubsetMask& x);

enum class Degeneracy { kDegenerate, kNonDegenerate, kNotSeparable };

struct DegeneracyResult {
  Degeneracy status = Degeneracy::kNotSeparable;
  /// Smallest subgroup 2-fragment, in all_subgroups order.
  std::optional<Subgroup> subgroup;
  std::uint32_t kappa2 = 0;
};

/// Subgroups (of order >= k) that are k-fragments of S.
std::vector<Subgroup> subgroup_fragments(const SubsetMask& s, unsigned k,
                                         const KappaOptions& options = {});

DegeneracyResult is_degenerate(const SubsetMask& s, const KappaOptions& options = {});

struct HyperAtom {
  Subgroup subgroup;
  /// False when S has several inclusion-maximal subgroup 2-fragments.
  bool unique = true;
};

/// The largest subgroup 2-fragment (ties by lex order). Throws Error when S
/// is not degenerate.
HyperAtom hyper_atom(const SubsetMask& s, const KappaOptions& options = {});

struct SuperAtom {
  enum class Kind { kGeneratedSubgroup, kHyperAtom };
  Subgroup subgroup;
  Kind kind = Kind::kGeneratedSubgroup;
};

const char* to_string(SuperAtom::Kind kind);

/// <S^*> when it is proper, otherwise the hyper-atom of S^*; nullopt when
/// S^* generates G and is not degenerate.
std::optional<SuperAtom> find_super_atom(const SubsetMask& s, const KappaOptions& options = {});

/// As find_super_atom, throwing Error("no super-atom") in the last case.
SuperAtom super_atom(const SubsetMask& s, const KappaOptions& options = {});

/// k-fragments of -S.
std::vector<SubsetMask> negative_fragments(const SubsetMask& s, unsigned k,
                                           const KappaOptions& options = {});

/// H-decomposition parts of a set, in the order used by find_matching: the
/// part inside H first (when present), the rest by smallest element.
std::vector<SubsetMask> coset_parts(const SubsetMask& a, const Subgroup& h);

struct MatchingAssignment {
  Subgroup h;
  std::vector<SubsetMask> s_parts;  // S_0 ... S_u, S_0 the part inside H
  std::vector<SubsetMask> t_parts;  // T_0 ... T_t
  std::vector<std::uint32_t> matched;             // J, ascending
  std::map<std::uint32_t, std::uint32_t> assignment;  // i in J -> n_i
  std::size_t size() const noexcept { return matched.size(); }
  /// size() >= min(u, t + 1), the guarantee when H is a 2-fragment and
  /// |G| >= (t+u+1)|H|. J lies in [0, t], so u itself is out of reach when t < u.
  bool meets_bound = false;
};

/// A maximum (T,S,H)-matching. Requires 0 in S, H a subgroup 2-fragment of
/// S, and |G| >= (t+u+1)|H|; throws Error otherwise.
MatchingAssignment find_matching(const SubsetMask& t, const SubsetMask& s, const Subgroup& h,
                                 const KappaOptions& options = {});

/// Memoizes the isoperimetric queries made while classifying many instances.
/// Not thread-safe; use one per worker.
class Workspace {
 public:
  explicit Workspace(KappaOptions options = {}) : options_(options) {}

  const KappaOptions& options() const noexcept { return options_; }
  const ConnectivityReport& kappa(const SubsetMask& s, unsigned k);
  const DegeneracyResult& degeneracy(const SubsetMask& s);
  const std::optional<HyperAtom>& hyper_atom(const SubsetMask& s);
  const std::optional<SuperAtom>& super_atom(const SubsetMask& s);
  const Morphism& quotient(const Subgroup& h);
  const std::vector<Subgroup>& subgroups(const GroupSpec& g);
  /// find_matching with the cached kappa_2.
  MatchingAssignment matching(const SubsetMask& t, const SubsetMask& s, const Subgroup& h);

  void clear();

 private:
  struct Entry {
    std::vector<ConnectivityReport> profile;
    std::optional<DegeneracyResult> degeneracy;
    bool hyper_done = false;
    std::optional<HyperAtom> hyper;
    bool super_done = false;
    std::optional<SuperAtom> super;
  };
  Entry& entry(const SubsetMask& s);

  KappaOptions options_;
  std::unordered_map<SubsetMask, Entry, SubsetMaskHash> entries_;
  std::unordered_map<SubsetMask, Morphism, SubsetMaskHash> quotients_;
  std::map<std::vector<std::uint32_t>, std::shared_ptr<const std::vector<Subgroup>>> subgroups_;
};

}  // namespace smallsum
