#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "utsarjan/common/time.hpp"
#include "utsarjan/diary/blob_store.hpp"
#include "utsarjan/diary/errors.hpp"
#include "utsarjan/diary/model.hpp"
#include "utsarjan/diary/repository.hpp"
#include "utsarjan/diary/timeline.hpp"

namespace utsarjan::diary {

struct NewPatient {
  std::string name;
  Date date_of_birth;
  Sex sex = Sex::F;
  std::optional<std::string> doctor_id;
  std::string history_notes;
  std::string contact;
};

struct NewDoctor {
  std::string name;
  std::string center;
  std::string contact;
};

struct MeasurementInput {
  Date date;
  std::optional<int> systolic;
  std::optional<int> diastolic;
  std::optional<double> height_cm;
  std::optional<double> weight_kg;
  std::string comments;
};

struct PrescriptionInput {
  std::string medicine_name;
  MedicineCategory category = MedicineCategory::Other;
  double dose = 0;
  std::string dose_unit;
  int frequency = 1;
  Date start;
  std::optional<Date> end;
};

/// Result of a diary write: the stored entry and the patient's entry
/// sequence immediately before and after it, taken under the same lock.
struct EntryWrite {
  DiaryEntry entry;
  std::vector<DiaryEntry> before;
  std::vector<DiaryEntry> after;
};

struct StoreOptions {
  std::size_t max_image_bytes = 5 * 1024 * 1024;
};

/// Patient and doctor aggregates with per-patient write serialization.
///
/// Every write copies the aggregate, applies the change, persists it through
/// the repository and only then publishes it, so readers never observe a
/// record that failed to persist.
class DiaryStore {
 public:
  DiaryStore(std::shared_ptr<Repository> repository, std::shared_ptr<BlobStore> blobs, Clock clock,
             StoreOptions options = {});

  DoctorProfile create_doctor(const NewDoctor& input);
  /// Throws UnknownDoctor when a doctor id is given but not registered.
  PatientProfile create_patient(const NewPatient& input);

  std::optional<DoctorProfile> find_doctor(const std::string& id) const;
  DoctorProfile doctor(const std::string& id) const;
  PatientProfile patient(const std::string& id) const;
  bool patient_exists(const std::string& id) const;

  /// Full copy of the aggregate, without authorization checks.
  PatientRecord snapshot(const std::string& patient_id) const;
  std::vector<PatientProfile> patients_of(const std::string& doctor_id) const;
  std::vector<std::string> patient_ids() const;

  /// Throws UnknownPatient, or NotLinked/Forbidden unless `actor` is the
  /// patient or the patient's current doctor.
  void authorize_read(const Actor& actor, const std::string& patient_id) const;

  EntryWrite record_entry(const Actor& actor, const std::string& patient_id, Date date, UrineProteinGrade grade,
                          std::string symptoms);
  ClinicalMeasurement record_measurement(const Actor& actor, const std::string& patient_id,
                                         const MeasurementInput& input);
  Prescription add_prescription(const Actor& actor, const std::string& patient_id, const PrescriptionInput& input);
  DoseEvent record_dose(const Actor& actor, const std::string& patient_id, const std::string& prescription_id,
                        Date date, bool taken);
  ReportUpload add_report(const Actor& actor, const std::string& patient_id, std::string_view content,
                          std::string media_type, std::string caption);
  std::string report_content(const Actor& actor, const std::string& patient_id, const std::string& report_id) const;
  AdviceMessage add_advice(const Actor& actor, const std::string& patient_id, std::string text);
  TestOrder add_test_order(const Actor& actor, const std::string& patient_id, std::vector<std::string> tests,
                           std::string comments);

  PatientProfile set_onset_category(const Actor& actor, const std::string& patient_id, OnsetCategory category);
  PatientProfile set_history_notes(const Actor& actor, const std::string& patient_id, std::string notes);

  /// Links the patient to `new_doctor_id`, resetting verification. A transfer
  /// to the current doctor changes nothing.
  PatientProfile transfer_patient(const std::string& patient_id, const std::string& new_doctor_id);
  PatientProfile verify_patient(const std::string& doctor_id, const std::string& patient_id);

  /// Appends unless a record with the same idempotency key exists.
  /// Returns true if the feed grew.
  bool append_notification(const NotificationRecord& record);

  std::vector<TimelineItem> timeline(const Actor& actor, const std::string& patient_id,
                                     const DateRange& range = {}) const;
  std::string export_csv(const std::string& patient_id) const;
  std::string export_csv(const Actor& actor, const std::string& patient_id) const;

  RecordCounts counts(const std::string& patient_id) const;

  /// Referential-integrity problems across the whole store; empty when sound.
  std::vector<std::string> audit() const;

  Timestamp now() const { return clock_(); }
  const StoreOptions& options() const { return options_; }

 private:
  struct Slot {
    mutable std::shared_mutex mutex;
    PatientRecord record;
  };

  std::shared_ptr<Slot> slot(const std::string& patient_id) const;
  PatientRecord read(const std::string& patient_id) const;
  /// Serialized read-modify-write of one patient aggregate.
  template <typename Fn>
  auto write(const std::string& patient_id, Fn&& fn);

  void require_linked_doctor(const Actor& actor, const PatientProfile& p) const;
  void require_patient_or_doctor(const Actor& actor, const PatientProfile& p) const;
  void require_not_future(Date date) const;

  std::shared_ptr<Repository> repository_;
  std::shared_ptr<BlobStore> blobs_;
  Clock clock_;
  StoreOptions options_;

  mutable std::shared_mutex index_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> patients_;
  std::map<std::string, DoctorProfile> doctors_;
};

}  // namespace utsarjan::diary
