#include "utsarjan/api/assessment.hpp"

#include <algorithm>

#include "utsarjan/rules/errors.hpp"
#include "utsarjan/rules/urine.hpp"

namespace utsarjan::api {

using diary::ClinicalMeasurement;
using rules::GrowthMetric;

std::string_view to_string(HeightSource source) {
  switch (source) {
    case HeightSource::Measured: return "measured";
    case HeightSource::Latest: return "latest";
    case HeightSource::ReferenceMedian: return "reference_median";
  }
  return "?";
}

notify::MeasurementAssessment MeasurementVerdict::for_triggers() const {
  notify::MeasurementAssessment a;
  if (bp) a.bp_stage = bp->stage;
  a.growth = growth;
  return a;
}

Assessor::Assessor(std::shared_ptr<const rules::BpReferenceTable> bp,
                   std::shared_ptr<const rules::GrowthReferenceTable> growth)
    : bp_(std::move(bp)), growth_(std::move(growth)) {}

namespace {

bool later(const ClinicalMeasurement& a, const ClinicalMeasurement& b) {
  return std::tie(a.date, a.created_at, a.id) > std::tie(b.date, b.created_at, b.id);
}

std::optional<double> last_height(const ClinicalMeasurement& m, std::span<const ClinicalMeasurement> history) {
  const ClinicalMeasurement* best = nullptr;
  for (const auto& h : history) {
    if (!h.height_cm || h.id == m.id || h.date > m.date) continue;
    if (!best || later(h, *best)) best = &h;
  }
  if (!best) return std::nullopt;
  return best->height_cm;
}

}  // namespace

MeasurementVerdict Assessor::assess(const diary::PatientProfile& patient, const ClinicalMeasurement& m,
                                    std::span<const ClinicalMeasurement> history) const {
  MeasurementVerdict v;
  int age = age_in_months(patient.date_of_birth, m.date);
  v.bmi = m.bmi();

  if (m.systolic && m.diastolic) {
    try {
      BpVerdict bp;
      if (m.height_cm) {
        bp.height_cm = *m.height_cm;
      } else if (auto h = last_height(m, history)) {
        bp.height_cm = *h;
        bp.height_source = HeightSource::Latest;
      } else {
        bp.height_cm = growth_->lookup(patient.sex, age, GrowthMetric::Height).median;
        bp.height_source = HeightSource::ReferenceMedian;
      }
      bp.stage = rules::classify_bp({*m.systolic, *m.diastolic, age, patient.sex, bp.height_cm}, *bp_);
      bp.color = rules::bp_color(bp.stage);
      v.bp = bp;
    } catch (const rules::ReferenceMiss&) {
      v.unassessed.emplace_back("bp");
    } catch (const rules::DomainError&) {
      v.unassessed.emplace_back("bp");
    }
  }

  auto grow = [&](std::optional<double> value, GrowthMetric metric) {
    if (!value) return;
    try {
      v.growth.emplace_back(metric, rules::assess_growth(*value, patient.sex, age, metric, *growth_));
    } catch (const rules::ReferenceMiss&) {
      v.unassessed.emplace_back(rules::to_string(metric));
    } catch (const rules::DomainError&) {
      v.unassessed.emplace_back(rules::to_string(metric));
    }
  };
  grow(m.height_cm, GrowthMetric::Height);
  grow(m.weight_kg, GrowthMetric::Weight);
  grow(v.bmi, GrowthMetric::Bmi);
  return v;
}

rules::LatestAssessment Assessor::latest(const diary::PatientRecord& record) const {
  rules::LatestAssessment out;
  if (!record.entries.empty()) {
    auto last = std::max_element(record.entries.begin(), record.entries.end(),
                                 [](const auto& a, const auto& b) { return a.date < b.date; });
    out.urine_color = rules::classify_urine_protein(last->grade);
  }
  const ClinicalMeasurement* last_bp = nullptr;
  const ClinicalMeasurement* last_anthro = nullptr;
  for (const auto& m : record.measurements) {
    if (m.systolic && (!last_bp || later(m, *last_bp))) last_bp = &m;
    if ((m.height_cm || m.weight_kg) && (!last_anthro || later(m, *last_anthro))) last_anthro = &m;
  }
  if (last_bp) {
    if (auto bp = assess(record.profile, *last_bp, record.measurements).bp) out.bp_stage = bp->stage;
  }
  if (last_anthro) {
    for (const auto& [metric, g] : assess(record.profile, *last_anthro, record.measurements).growth) {
      out.growth_bands.push_back(g.band);
    }
  }
  return out;
}

bool Assessor::critical(const diary::PatientRecord& record) const {
  return rules::patient_criticality(latest(record), notify::relapse_state_of(record.entries));
}

nlohmann::json to_json(const MeasurementVerdict& v) {
  nlohmann::json j;
  j["bmi"] = v.bmi ? nlohmann::json(rules::round_display(*v.bmi)) : nlohmann::json(nullptr);
  if (v.bp) {
    j["bp"] = {{"stage", rules::to_string(v.bp->stage)},
               {"color", rules::to_string(v.bp->color)},
               {"height_cm", v.bp->height_cm},
               {"height_source", to_string(v.bp->height_source)}};
  } else {
    j["bp"] = nullptr;
  }
  j["growth"] = nlohmann::json::object();
  for (const auto& [metric, g] : v.growth) {
    j["growth"][std::string(rules::to_string(metric))] = {{"z", g.z}, {"band", rules::to_string(g.band)}};
  }
  j["unassessed"] = v.unassessed;
  return j;
}

}  // namespace utsarjan::api
