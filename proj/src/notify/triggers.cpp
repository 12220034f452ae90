#include "utsarjan/notify/triggers.hpp"

#include <algorithm>
#include <cstdio>

namespace utsarjan::notify {

rules::RelapseState relapse_state_of(std::span<const diary::DiaryEntry> entries) {
  rules::RelapseScanner scanner;
  for (const auto& e : entries) scanner.extend({e.date, e.grade});
  return scanner.state();
}

std::vector<NotificationEvent> evaluate_entry_triggers(const diary::DiaryEntry& entry,
                                                       std::span<const diary::DiaryEntry> history,
                                                       const rules::RelapseState& relapse_before, Timestamp now) {
  std::vector<NotificationEvent> events;
  if (rules::is_heavy(entry.grade)) {
    events.push_back(make_event(NotificationKind::HeavyProteinuria, entry.patient_id, entry.id,
                                "Urine protein " + std::string(rules::to_string(entry.grade)) + " recorded on " +
                                    entry.date.to_string() + ".",
                                now));
  }
  auto after = relapse_state_of(history);
  if (relapse_before.status != rules::RelapseStatus::Relapse && after.status == rules::RelapseStatus::Relapse) {
    events.push_back(make_event(NotificationKind::RelapseDetected, entry.patient_id, entry.id,
                                "Possible relapse: urine protein 3+ or higher on " +
                                    std::to_string(after.suspect_count) + " consecutive entries since " +
                                    after.onset_date->to_string() + ".",
                                now));
  }
  return events;
}

std::vector<NotificationEvent> evaluate_entry_triggers(const diary::EntryWrite& write, Timestamp now) {
  return evaluate_entry_triggers(write.entry, write.after, relapse_state_of(write.before), now);
}

std::vector<NotificationEvent> evaluate_measurement_triggers(const diary::ClinicalMeasurement& m,
                                                             const MeasurementAssessment& a, Timestamp now) {
  std::vector<NotificationEvent> events;
  std::string bp = m.systolic ? std::to_string(*m.systolic) + "/" + std::to_string(*m.diastolic) + " mmHg" : "";
  if (a.bp_stage == rules::BpStage::Stage1) {
    events.push_back(make_event(NotificationKind::BpStage1, m.patient_id, m.id,
                                "Blood pressure " + bp + " on " + m.date.to_string() + " is Stage 1 hypertension.", now));
  } else if (a.bp_stage == rules::BpStage::Stage2) {
    events.push_back(make_event(NotificationKind::BpStage2, m.patient_id, m.id,
                                "Blood pressure " + bp + " on " + m.date.to_string() + " is Stage 2 hypertension.", now));
  }
  std::string red;
  for (const auto& [metric, g] : a.growth) {
    if (g.band != rules::SeverityColor::Red) continue;
    char z[32];
    std::snprintf(z, sizeof z, "%.2f", g.z);
    red += (red.empty() ? "" : ", ") + std::string(rules::to_string(metric)) + " (z = " + z + ")";
  }
  if (!red.empty()) {
    events.push_back(make_event(NotificationKind::GrowthRed, m.patient_id, m.id,
                                "Outside 2 SD of the reference on " + m.date.to_string() + ": " + red + ".", now));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const NotificationEvent& x, const NotificationEvent& y) { return x.kind < y.kind; });
  return events;
}

}  // namespace utsarjan::notify
