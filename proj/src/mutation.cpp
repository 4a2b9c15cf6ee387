#include "smallsum/mutation.hpp"

#include <atomic>

#include "smallsum/error.hpp"

namespace smallsum::mutation {

namespace {
std::atomic<int> g_active{kNone};
}

const std::vector<SiteInfo>& sites() {
  static const std::vector<SiteInfo> list = {
      {kEssSDefect, "essential.s_defect"},
      {kEssTDefect, "essential.t_defect"},
      {kEssSameDifference, "essential.same_difference"},
      {kEssIHalf, "essential.i.h_order"},
      {kEssIS0, "essential.i.s_first"},
      {kEssISu, "essential.i.s_last"},
      {kEssIT0, "essential.i.t_first"},
      {kEssITt, "essential.i.t_last"},
      {kEssIISu, "essential.ii.s_last"},
      {kEssIITt, "essential.ii.t_last"},
      {kEssIISPrev, "essential.ii.s_before_last"},
      {kEssIITPrev, "essential.ii.t_before_last"},
      {kEssIICross, "essential.ii.cross_identity"},
      {kEssIIIS0, "essential.iii.s_first"},
      {kEssIIIT0, "essential.iii.t_first"},
      {kEssIIISu, "essential.iii.s_last"},
      {kEssIIITt, "essential.iii.t_last"},
      {kEssIIIDirectSum, "essential.iii.direct_sum"},
      {kN3Size, "n3.i.size"},
      {kN3Translate, "n3.i.translate"},
      {kN3Complement, "n3.i.complement"},
      {kN3Progressions, "n3.ii.progressions"},
      {kN3QuotientEquality, "n3.iv.quotient_equality"},
      {kN3EndSum, "n3.iv.end_sum"},
      {kN3Periodic, "n3.iv.periodic"},
      {kN3MinusPeriodic, "n3.iv.minus_periodic"},
  };
  return list;
}

std::string site_name(int id) {
  for (const auto& s : sites())
    if (s.id == id) return s.name;
  return id == kNone ? "none" : "unknown";
}

int active() noexcept { return g_active.load(std::memory_order_relaxed); }

void set_active(int id) {
  if (id < kNone || id >= kSiteCount) throw Error("unknown mutation site " + std::to_string(id));
  g_active.store(id, std::memory_order_relaxed);
}

}  // namespace smallsum::mutation
