#include "utsarjan/diary/model.hpp"

#include <charconv>

#include "utsarjan/diary/errors.hpp"
#include "utsarjan/rules/growth.hpp"

namespace utsarjan::diary {

std::string_view to_string(Role role) { return role == Role::Patient ? "patient" : "doctor"; }

std::optional<Role> parse_role(std::string_view text) {
  if (text == "patient") return Role::Patient;
  if (text == "doctor") return Role::Doctor;
  return std::nullopt;
}

std::string_view to_string(OnsetCategory category) {
  switch (category) {
    case OnsetCategory::SSNS: return "SSNS";
    case OnsetCategory::SRNS_IR: return "SRNS_IR";
    case OnsetCategory::SRNS_LR: return "SRNS_LR";
    case OnsetCategory::Unassigned: return "Unassigned";
  }
  return "?";
}

std::optional<OnsetCategory> parse_onset_category(std::string_view text) {
  for (auto c : {OnsetCategory::SSNS, OnsetCategory::SRNS_IR, OnsetCategory::SRNS_LR, OnsetCategory::Unassigned}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view to_string(MedicineCategory category) {
  return category == MedicineCategory::Steroid ? "Steroid" : "Other";
}

std::optional<MedicineCategory> parse_medicine_category(std::string_view text) {
  if (text == "Steroid") return MedicineCategory::Steroid;
  if (text == "Other") return MedicineCategory::Other;
  return std::nullopt;
}

std::string_view to_string(Recipient recipient) {
  switch (recipient) {
    case Recipient::Patient: return "Patient";
    case Recipient::Doctor: return "Doctor";
    case Recipient::Both: return "Both";
  }
  return "?";
}

std::optional<Recipient> parse_recipient(std::string_view text) {
  if (text == "Patient") return Recipient::Patient;
  if (text == "Doctor") return Recipient::Doctor;
  if (text == "Both") return Recipient::Both;
  return std::nullopt;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownPatient: return "unknown_patient";
    case ErrorCode::UnknownDoctor: return "unknown_doctor";
    case ErrorCode::UnknownRecord: return "unknown_record";
    case ErrorCode::FutureDate: return "future_date";
    case ErrorCode::NotLinked: return "not_linked";
    case ErrorCode::Forbidden: return "forbidden";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Storage: return "storage";
  }
  return "?";
}

std::optional<double> ClinicalMeasurement::bmi() const {
  if (!height_cm || !weight_kg) return std::nullopt;
  return rules::compute_bmi(*weight_kg, *height_cm);
}

std::string Prescription::label() const {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, dose);
  std::string out = medicine_name;
  if (ec == std::errc{} && dose > 0) {
    out += ' ';
    out.append(buf, ptr);
    if (!dose_unit.empty()) out += " " + dose_unit;
  }
  return out;
}

const Prescription* PatientRecord::find_prescription(std::string_view id) const {
  for (const auto& p : prescriptions) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

RecordCounts count_records(const PatientRecord& r) {
  return {r.entries.size(), r.measurements.size(), r.prescriptions.size(), r.doses.size(),
          r.reports.size(), r.advice.size(),       r.tests.size(),         r.notifications.size()};
}

}  // namespace utsarjan::diary
