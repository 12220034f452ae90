#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "utsarjan/common/time.hpp"
#include "utsarjan/rules/types.hpp"

namespace utsarjan::diary {

using rules::Sex;
using rules::UrineProteinGrade;

enum class Role : std::uint8_t { Patient, Doctor };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

/// Who is performing an operation. Authorization is decided against the
/// patient's current doctor link.
struct Actor {
  Role role = Role::Patient;
  std::string id;

  static Actor patient(std::string id) { return {Role::Patient, std::move(id)}; }
  static Actor doctor(std::string id) { return {Role::Doctor, std::move(id)}; }
};

enum class OnsetCategory : std::uint8_t { SSNS, SRNS_IR, SRNS_LR, Unassigned };

std::string_view to_string(OnsetCategory category);
std::optional<OnsetCategory> parse_onset_category(std::string_view text);

struct PatientProfile {
  std::string id;
  std::string name;
  Date date_of_birth;
  Sex sex = Sex::F;
  OnsetCategory onset_category = OnsetCategory::Unassigned;
  std::optional<std::string> doctor_id;
  bool verified = false;
  std::string history_notes;
  std::string contact;
  Timestamp created_at;
};

struct DoctorProfile {
  std::string id;
  std::string name;
  std::string center;
  std::string contact;
  Timestamp created_at;
};

struct DiaryEntry {
  std::string id;
  std::string patient_id;
  Date date;
  UrineProteinGrade grade = UrineProteinGrade::Negative;
  std::string symptoms;
  Role author_role = Role::Patient;
  Timestamp created_at;
};

/// Doctor-entered vitals. BMI is never stored; it is derived from height and weight.
struct ClinicalMeasurement {
  std::string id;
  std::string patient_id;
  Date date;
  std::optional<int> systolic;
  std::optional<int> diastolic;
  std::optional<double> height_cm;
  std::optional<double> weight_kg;
  std::string comments;
  std::string recorded_by;
  Timestamp created_at;

  std::optional<double> bmi() const;
};

enum class MedicineCategory : std::uint8_t { Steroid, Other };

std::string_view to_string(MedicineCategory category);
std::optional<MedicineCategory> parse_medicine_category(std::string_view text);

struct Prescription {
  std::string id;
  std::string patient_id;
  std::string medicine_name;
  MedicineCategory category = MedicineCategory::Other;
  double dose = 0;
  std::string dose_unit;
  int frequency = 1;  // doses per day
  Date start;
  std::optional<Date> end;
  std::string prescribed_by;
  Timestamp created_at;

  bool active_on(Date d) const { return d >= start && (!end || d <= *end); }
  /// "Prednisolone 20 mg"
  std::string label() const;
};

struct DoseEvent {
  std::string id;
  std::string prescription_id;
  std::string patient_id;
  Date date;
  bool taken = false;
  Timestamp recorded_at;
};

struct ReportUpload {
  std::string id;
  std::string patient_id;
  std::string blob_ref;  // sha-256 hex of the content
  std::string media_type;
  std::size_t size_bytes = 0;
  std::string caption;
  Role author_role = Role::Patient;
  Timestamp created_at;
};

struct AdviceMessage {
  std::string id;
  std::string patient_id;
  std::string text;
  Role author_role = Role::Patient;
  std::string author_id;
  Timestamp created_at;
};

struct TestOrder {
  std::string id;
  std::string patient_id;
  std::vector<std::string> tests;
  std::string comments;
  std::string ordered_by;
  Timestamp created_at;
};

enum class Recipient : std::uint8_t { Patient, Doctor, Both };

std::string_view to_string(Recipient recipient);
std::optional<Recipient> parse_recipient(std::string_view text);

/// A delivered alert as kept in the patient's in-app feed.
struct NotificationRecord {
  std::string id;
  std::string idempotency_key;
  std::string patient_id;
  std::string kind;
  Recipient recipient = Recipient::Both;
  std::string body;
  std::string message_key;
  std::string source_id;
  Timestamp created_at;

  bool visible_to(Role role) const {
    return recipient == Recipient::Both ||
           (role == Role::Patient ? recipient == Recipient::Patient : recipient == Recipient::Doctor);
  }
};

/// Patient aggregate: the profile plus every record owned by the patient.
/// This is the unit of persistence and of write serialization.
struct PatientRecord {
  PatientProfile profile;
  std::vector<DiaryEntry> entries;  // ascending by date, one per date
  std::vector<ClinicalMeasurement> measurements;
  std::vector<Prescription> prescriptions;
  std::vector<DoseEvent> doses;
  std::vector<ReportUpload> reports;
  std::vector<AdviceMessage> advice;
  std::vector<TestOrder> tests;
  std::vector<NotificationRecord> notifications;

  const Prescription* find_prescription(std::string_view id) const;
};

struct RecordCounts {
  std::size_t entries = 0, measurements = 0, prescriptions = 0, doses = 0, reports = 0, advice = 0,
              tests = 0, notifications = 0;

  friend bool operator==(const RecordCounts&, const RecordCounts&) = default;
};

RecordCounts count_records(const PatientRecord& record);

}  // namespace utsarjan::diary
