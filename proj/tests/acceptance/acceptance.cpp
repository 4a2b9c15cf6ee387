// One PASS/FAIL line per acceptance criterion on stdout; detail on stderr.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "../unit/oracle.hpp"
#include "smallsum/isoperimetry.hpp"
#include "smallsum/mutation.hpp"
#include "smallsum/serialize.hpp"
#include "smallsum/setops.hpp"
#include "smallsum/verifier.hpp"

using namespace smallsum;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

VerificationReport sweep(const std::string& theorem, std::uint32_t max_order,
                         std::uint32_t min_order = 2) {
  InstanceFilter f;
  f.max_order = max_order;
  f.min_order = min_order;
  f.max_violations = 8;
  const VerificationReport r = verify_theorem(theorem, f);
  std::cerr << theorem << ": " << json_of(r, true).dump() << '\n';
  return r;
}

std::string summary(const VerificationReport& r) {
  std::ostringstream os;
  os << r.theorem << " instances=" << r.instances << " applicable=" << r.applicable
     << " violations=" << r.violation_count;
  return os.str();
}

bool sweep_ok(const VerificationReport& r) { return r.pass() && r.applicable > 0; }

void simple(int id, const std::string& name, const std::string& theorem, std::uint32_t n) {
  const VerificationReport r = sweep(theorem, n);
  report(id, name, sweep_ok(r), summary(r));
}

std::uint64_t tally(const VerificationReport& r, const std::string& k) {
  const auto it = r.tally.find(k);
  return it == r.tally.end() ? 0 : it->second;
}

void n3_criterion() {
  const VerificationReport r = sweep("n3", 12);
  std::ostringstream os;
  os << summary(r);
  for (const char* c : {"i", "ii", "iii", "iv"}) os << ' ' << c << '=' << tally(r, c);
  const bool ok = sweep_ok(r) && tally(r, "i") > 0 && tally(r, "ii") > 0 && tally(r, "iv") > 0;
  report(6, "n-3 cases, order <= 12", ok, os.str());
}

void pair_corollaries() {
  const VerificationReport a = sweep("kemperman", 12);
  const VerificationReport b = sweep("grynkiewicz", 12);
  report(7, "partition corollaries <= 12", sweep_ok(a) && sweep_ok(b),
         summary(a) + "; " + summary(b));
}

// |G| = 3|S| = 3|T| = 4 kappa_2(T*) = 12, checked again with the full scan
void twothird_case_i() {
  const VerificationReport r = sweep("twothird", 12, 12);
  const auto it = r.examples.find("i");
  if (it == r.examples.end()) {
    report(8, "two-thirds case (i) at 12", r.pass() && r.instances > 0,
           "vacuous: no instance in the exhaustive order-12 sweep (" + summary(r) + ")");
    return;
  }
  const PairInstance& p = it->second;
  const oracle::Group o(p.group.factors());
  oracle::Set t = oracle::to_set(p.t);
  t = o.shift(t, o.neg(*t.begin()));
  const bool shape = p.group.order() == 12 && p.s.size() == 4 && p.t.size() == 4 &&
                     o.kappa(t, 2) == 3;
  std::ostringstream os;
  os << "found " << tally(r, "i") << " instances, first " << json_of(p).dump();
  report(8, "two-thirds case (i) at 12", r.pass() && shape, os.str());
}

void seeded_vs_exact() {
  KappaOptions exact, seeded;
  exact.mode = KappaMode::kExact;
  seeded.mode = KappaMode::kSeeded;
  std::uint64_t checked = 0, mismatches = 0;
  for (const auto& f : abelian_groups_up_to(14)) {
    const GroupSpec g = make_group(f);
    const unsigned k_max = std::min(4u, (g.order() + 1) / 2);
    for (std::uint64_t m = 0; m < (1ull << (g.order() - 1)); ++m) {
      const SubsetMask s = SubsetMask::from_word(g, (m << 1) | 1);
      const auto a = kappa_profile(s, k_max, exact);
      const auto b = kappa_profile(s, k_max, seeded);
      for (std::size_t i = 0; i < a.size(); ++i) {
        ++checked;
        if (a[i].kappa != b[i].kappa) {
          if (++mismatches <= 5)
            std::cerr << "kappa mismatch " << json_of(s).dump() << " in " << g.to_string()
                      << " k=" << a[i].k << ": exact " << a[i].kappa << ", seeded " << b[i].kappa
                      << '\n';
        }
      }
    }
  }
  std::ostringstream os;
  os << checked << " (S,k) pairs, " << mismatches << " mismatches";
  report(9, "seeded kappa = exact, <= 14", mismatches == 0 && checked > 0, os.str());
}

bool sweep_fails(const std::string& theorem, std::uint32_t n) {
  InstanceFilter f;
  f.max_order = n;
  f.max_violations = 1;
  return !verify_theorem(theorem, f).pass();
}

void mutation_harness() {
  std::size_t killed = 0;
  const auto& sites = mutation::sites();
  std::string survivors;
  for (const auto& site : sites) {
    mutation::Guard guard(site.id);
    std::string by;
    if (sweep_fails("essential", 8)) {
      by = "essential";
    } else if (sweep_fails("n3", 12)) {
      by = "n3";
    }
    std::cerr << "mutant " << site.name << ": " << (by.empty() ? "survived" : "killed by " + by)
              << '\n';
    if (by.empty()) {
      survivors += ' ';
      survivors += site.name;
    } else {
      ++killed;
    }
  }
  std::ostringstream os;
  os << killed << "/" << sites.size() << " mutants caught";
  if (!survivors.empty()) os << "; survivors:" << survivors;
  report(10, "mutation sensitivity", sites.size() >= 10 && killed == sites.size(), os.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    simple(1, "Kneser bound, order <= 10", "kneser", 10);
    simple(2, "duality identities, order <= 10", "duality", 10);
    simple(3, "1-atoms, order <= 16", "one_atoms", 16);
    simple(4, "2-atom dichotomy, order <= 16", "two_atoms", 16);
    simple(5, "3x3 classifier, order <= 16", "3x3", 16);
    n3_criterion();
    pair_corollaries();
    twothird_case_i();
    seeded_vs_exact();
    mutation_harness();
  } catch (const std::exception& e) {
    std::printf("FAIL    aborted: %s\n", e.what());
    return 1;
  }
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d criteria failed, %.1f s\n", failures, s);
  return failures == 0 ? 0 : 1;
}
