#pragma once

#include <string>
#include <vector>

namespace smallsum::mutation {

/// Equality checks that the mutation harness can flip. Each site guards one
/// defining condition in the essential-pair recognizer or the n-3 classifier.
enum Site : int {
  kNone = 0,
  kEssSDefect,
  kEssTDefect,
  kEssSameDifference,
  kEssIHalf,
  kEssIS0,
  kEssISu,
  kEssIT0,
  kEssITt,
  kEssIISu,
  kEssIITt,
  kEssIISPrev,
  kEssIITPrev,
  kEssIICross,
  kEssIIIS0,
  kEssIIIT0,
  kEssIIISu,
  kEssIIITt,
  kEssIIIDirectSum,
  kN3Size,
  kN3Translate,
  kN3Complement,
  kN3Progressions,
  kN3QuotientEquality,
  kN3EndSum,
  kN3Periodic,
  kN3MinusPeriodic,
  kSiteCount
};

struct SiteInfo {
  int id;
  const char* name;
};

const std::vector<SiteInfo>& sites();
std::string site_name(int id);

/// The flipped site; kNone in normal operation. Process-wide.
int active() noexcept;
void set_active(int id);

/// `value`, negated when `id` is the active mutant.
inline bool check(int id, bool value) noexcept { return id == active() ? !value : value; }

/// Activates a mutant for the lifetime of the guard.
class Guard {
 public:
  explicit Guard(int id) : previous_(active()) { set_active(id); }
  ~Guard() { set_active(previous_); }
  Guard(const Guard&) = delete;
  Guard& operator=(const Guard&) = delete;

 private:
  int previous_;
};

}  // namespace smallsum::mutation
