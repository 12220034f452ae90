#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "utsarjan/diary/model.hpp"
#include "utsarjan/diary/store.hpp"
#include "utsarjan/notify/event.hpp"
#include "utsarjan/rules/growth.hpp"
#include "utsarjan/rules/urine.hpp"

namespace utsarjan::notify {

/// Relapse state of a date-ordered entry list.
rules::RelapseState relapse_state_of(std::span<const diary::DiaryEntry> entries);

/// Events for a newly stored diary entry. `history` is the patient's entry
/// sequence including `entry`; `relapse_before` is the state without it.
///   3+/4+                         -> HeavyProteinuria
///   transition into Relapse       -> RelapseDetected
std::vector<NotificationEvent> evaluate_entry_triggers(const diary::DiaryEntry& entry,
                                                       std::span<const diary::DiaryEntry> history,
                                                       const rules::RelapseState& relapse_before, Timestamp now);
std::vector<NotificationEvent> evaluate_entry_triggers(const diary::EntryWrite& write, Timestamp now);

/// Clinical-rules verdicts for one measurement; absent channels stay unset.
struct MeasurementAssessment {
  std::optional<rules::BpStage> bp_stage;
  std::vector<std::pair<rules::GrowthMetric, rules::GrowthAssessment>> growth;
};

/// Stage1 -> BpStage1, Stage2 -> BpStage2, any Red growth band -> GrowthRed.
/// Events come back ordered by kind.
std::vector<NotificationEvent> evaluate_measurement_triggers(const diary::ClinicalMeasurement& measurement,
                                                             const MeasurementAssessment& assessment, Timestamp now);

}  // namespace utsarjan::notify
