#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smallsum/classifier.hpp"

namespace smallsum {

enum class Sampling { kExhaustive, kRandom };

/// What a sweep enumerates. Sets are translation-normalized: S contains 0
/// and T is shifted so that its minimum is 0.
struct InstanceFilter {
  /// Explicit factor lists; when empty, every abelian group of order
  /// min_order..max_order up to isomorphism.
  std::vector<std::vector<std::uint32_t>> groups;
  std::uint32_t min_order = 2;
  std::uint32_t max_order = 0;  // 0: the theorem's default

  std::uint32_t s_min = 1;
  std::uint32_t s_max = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t t_min = 1;
  std::uint32_t t_max = std::numeric_limits<std::uint32_t>::max();
  /// Restricts pair statements to one value of mu = |S| + |T| - |S+T|.
  std::optional<int> mu;

  Sampling sampling = Sampling::kExhaustive;
  std::uint64_t seed = 1;
  std::uint64_t count = 1000;

  /// Upper bound on the estimated number of sumset evaluations.
  double budget = 1e10;
  KappaOptions kappa;
  /// 0 reads SMALLSUM_WORKERS, falling back to the hardware thread count.
  unsigned workers = 0;
  /// Violations kept in the report; all are counted.
  std::size_t max_violations = 64;
};

enum class Shape {
  kSingle,    // S only
  kSingleMu,  // S with mu in {0, 1}
  kPair,      // S and T
};

struct Counterexample {
  std::string theorem;
  PairInstance instance;
  std::string failed_clause;
  bool minimized = false;
};

struct VerificationReport {
  std::string theorem;
  Sampling sampling = Sampling::kExhaustive;
  KappaMode kappa_mode = KappaMode::kAuto;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint32_t>> groups;
  std::uint64_t instances = 0;
  std::uint64_t applicable = 0;
  std::uint64_t violation_count = 0;
  std::vector<Counterexample> violations;
  /// Case label -> instances where it holds; for classifiers also the
  /// principal case under "principal:<label>".
  std::map<std::string, std::uint64_t> tally;
  /// First instance (in enumeration order) per case label.
  std::map<std::string, PairInstance> examples;
  double seconds = 0.0;
  unsigned workers = 1;
  double estimate = 0.0;

  bool pass() const noexcept { return violation_count == 0; }
};

/// Per-worker memo shared by the checks of one sweep.
struct CheckContext {
  explicit CheckContext(KappaOptions options) : ws(options) {}
  Workspace ws;
  std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint64_t>>, bool> vosper;
};

struct CheckOutcome {
  bool applicable = false;
  std::optional<std::string> failure;
  std::vector<std::string> labels;
  std::string principal;
};

struct TheoremInfo {
  std::string id;
  Shape shape = Shape::kPair;
  std::uint32_t default_max_order = 10;
  std::uint32_t s_min = 1;
  std::uint32_t s_max = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t t_min = 1;
  std::uint32_t t_max = std::numeric_limits<std::uint32_t>::max();
  /// Estimated sumset evaluations per instance, as a multiple of 2^(n-1).
  bool per_instance_scan = false;
  std::string summary;
  std::function<CheckOutcome(const PairInstance&, CheckContext&)> check;
};

const std::vector<TheoremInfo>& theorem_registry();
const TheoremInfo& theorem_info(const std::string& id);

/// mu = |S| + |T| - |S+T|.
int sumset_defect(const SubsetMask& s, const SubsetMask& t);

/// Groups the filter covers, in enumeration order.
std::vector<std::vector<std::uint32_t>> filter_groups(const InstanceFilter& f,
                                                      const TheoremInfo& info);

/// Estimated cost; exhaustive sweeps above the budget are refused.
double estimate_cost(const InstanceFilter& f, const TheoremInfo& info);

/// Every instance the filter produces, in sweep order. Throws Error when an
/// exhaustive enumeration exceeds the budget.
std::vector<PairInstance> enumerate_instances(const InstanceFilter& f, const std::string& theorem);

VerificationReport verify_theorem(const std::string& theorem, const InstanceFilter& f);

/// The failed clause when the stored instance satisfies the hypotheses and
/// fails the check.
std::optional<std::string> reproduce(const std::string& theorem, const PairInstance& inst,
                                     const KappaOptions& options = {});

/// Greedy shrink: quotients and subgroups of the group, then elements of S,
/// then of T, keeping the failed clause. Throws Error when the input does not
/// fail.
Counterexample minimize(const Counterexample& c, const KappaOptions& options = {});

/// Minimizes each violation and drops repeats of the same minimized form.
std::vector<Counterexample> minimize_all(const std::vector<Counterexample>& cs,
                                         const KappaOptions& options = {});

unsigned resolve_workers(unsigned requested);

}  // namespace smallsum
