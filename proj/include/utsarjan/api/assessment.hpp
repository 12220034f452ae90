#pragma once

#include <json.hpp>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "utsarjan/diary/model.hpp"
#include "utsarjan/notify/triggers.hpp"
#include "utsarjan/rules/blood_pressure.hpp"
#include "utsarjan/rules/criticality.hpp"
#include "utsarjan/rules/growth.hpp"

namespace utsarjan::api {

enum class HeightSource : std::uint8_t { Measured, Latest, ReferenceMedian };
std::string_view to_string(HeightSource source);

struct BpVerdict {
  rules::BpStage stage = rules::BpStage::Normal;
  rules::SeverityColor color = rules::SeverityColor::Green;
  double height_cm = 0;
  HeightSource height_source = HeightSource::Measured;
};

struct MeasurementVerdict {
  std::optional<BpVerdict> bp;
  std::optional<double> bmi;
  std::vector<std::pair<rules::GrowthMetric, rules::GrowthAssessment>> growth;
  /// Channels present in the measurement that the reference data cannot cover.
  std::vector<std::string> unassessed;

  notify::MeasurementAssessment for_triggers() const;
};

/// Applies the clinical rules to stored records using the loaded reference tables.
class Assessor {
 public:
  Assessor(std::shared_ptr<const rules::BpReferenceTable> bp, std::shared_ptr<const rules::GrowthReferenceTable> growth);

  /// `history` is the patient's measurements; it supplies the last known
  /// height when `m` carries BP without one.
  MeasurementVerdict assess(const diary::PatientProfile& patient, const diary::ClinicalMeasurement& m,
                            std::span<const diary::ClinicalMeasurement> history) const;

  /// Latest urine color, latest BP stage and the growth bands of the latest anthropometry.
  rules::LatestAssessment latest(const diary::PatientRecord& record) const;
  bool critical(const diary::PatientRecord& record) const;

  const rules::BpReferenceTable& bp_table() const { return *bp_; }
  const rules::GrowthReferenceTable& growth_table() const { return *growth_; }

 private:
  std::shared_ptr<const rules::BpReferenceTable> bp_;
  std::shared_ptr<const rules::GrowthReferenceTable> growth_;
};

nlohmann::json to_json(const MeasurementVerdict& verdict);

}  // namespace utsarjan::api
