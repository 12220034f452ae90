#pragma once

#include <optional>
#include <vector>

#include "utsarjan/rules/types.hpp"
#include "utsarjan/rules/urine.hpp"

namespace utsarjan::rules {

/// Most recent assessment of each channel; absent channels are simply unset.
struct LatestAssessment {
  std::optional<SeverityColor> urine_color;
  std::optional<BpStage> bp_stage;
  std::vector<SeverityColor> growth_bands;
};

/// True iff a relapse is ongoing, BP is Stage2, or any available channel is Red.
bool patient_criticality(const LatestAssessment& latest, const RelapseState& relapse);

}  // namespace utsarjan::rules
