#pragma once

#include <json.hpp>

#include "utsarjan/diary/model.hpp"

namespace utsarjan {

void to_json(nlohmann::json& j, const Date& d);
void from_json(const nlohmann::json& j, Date& d);
void to_json(nlohmann::json& j, const Timestamp& t);
void from_json(const nlohmann::json& j, Timestamp& t);

}  // namespace utsarjan

namespace utsarjan::diary {

// Storage encoding. Derived values (bmi) are never written.
void to_json(nlohmann::json& j, const PatientProfile& p);
void from_json(const nlohmann::json& j, PatientProfile& p);
void to_json(nlohmann::json& j, const DoctorProfile& d);
void from_json(const nlohmann::json& j, DoctorProfile& d);
void to_json(nlohmann::json& j, const DiaryEntry& e);
void from_json(const nlohmann::json& j, DiaryEntry& e);
void to_json(nlohmann::json& j, const ClinicalMeasurement& m);
void from_json(const nlohmann::json& j, ClinicalMeasurement& m);
void to_json(nlohmann::json& j, const Prescription& p);
void from_json(const nlohmann::json& j, Prescription& p);
void to_json(nlohmann::json& j, const DoseEvent& d);
void from_json(const nlohmann::json& j, DoseEvent& d);
void to_json(nlohmann::json& j, const ReportUpload& r);
void from_json(const nlohmann::json& j, ReportUpload& r);
void to_json(nlohmann::json& j, const AdviceMessage& a);
void from_json(const nlohmann::json& j, AdviceMessage& a);
void to_json(nlohmann::json& j, const TestOrder& t);
void from_json(const nlohmann::json& j, TestOrder& t);
void to_json(nlohmann::json& j, const NotificationRecord& n);
void from_json(const nlohmann::json& j, NotificationRecord& n);
void to_json(nlohmann::json& j, const PatientRecord& r);
void from_json(const nlohmann::json& j, PatientRecord& r);

}  // namespace utsarjan::diary
