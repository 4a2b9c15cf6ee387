#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smallsum/classifier.hpp"

namespace smallsum::audit {

// Re-checks written against plain sorted index vectors, sharing nothing with
// the classifier beyond group arithmetic. A verdict is trusted only when these
// agree with it.

struct AuditResult {
  bool ok = true;
  std::string reason;
};

AuditResult audit_verdict(const StructureVerdict& v, Workspace& ws);

/// Smallest essential kind (1, 2, 3) of {S,T} for H found by direct search,
/// 0 when none. With only_kind != 0 just that kind is tried.
int essential_kind(const SubsetMask& s, const SubsetMask& t, const Subgroup& h,
                   int only_kind = 0);

/// Labels of the n-3 cases that hold, given the candidate subgroups.
std::vector<std::string> n3_cases(const PairInstance& inst,
                                  const std::vector<std::pair<Subgroup, std::string>>& candidates);

/// kappa_k by scanning every subset; for small orders only.
std::uint32_t brute_kappa(const SubsetMask& s, unsigned k);

}  // namespace smallsum::audit
