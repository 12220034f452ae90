#include "utsarjan/rules/criticality.hpp"

#include <algorithm>

namespace utsarjan::rules {

bool patient_criticality(const LatestAssessment& latest, const RelapseState& relapse) {
  if (relapse.status == RelapseStatus::Relapse) return true;
  if (latest.urine_color == SeverityColor::Red) return true;
  if (latest.bp_stage == BpStage::Stage2) return true;
  return std::ranges::any_of(latest.growth_bands, [](SeverityColor c) { return c == SeverityColor::Red; });
}

}  // namespace utsarjan::rules
