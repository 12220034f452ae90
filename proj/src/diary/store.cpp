#include "utsarjan/diary/store.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "utsarjan/common/crypto.hpp"

namespace utsarjan::diary {

namespace {

const std::set<std::string, std::less<>> kReportMediaTypes{"image/jpeg", "image/png", "image/webp", "image/gif",
                                                           "application/pdf"};

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::Validation, message);
}

std::string trimmed(std::string s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

DiaryStore::DiaryStore(std::shared_ptr<Repository> repository, std::shared_ptr<BlobStore> blobs, Clock clock,
                       StoreOptions options)
    : repository_(std::move(repository)), blobs_(std::move(blobs)), clock_(std::move(clock)), options_(options) {
  for (auto& d : repository_->load_doctors()) doctors_.emplace(d.id, std::move(d));
  for (auto& r : repository_->load_patients()) {
    auto s = std::make_shared<Slot>();
    auto id = r.profile.id;
    s->record = std::move(r);
    patients_.emplace(std::move(id), std::move(s));
  }
}

// ---- profiles ---------------------------------------------------------------

DoctorProfile DiaryStore::create_doctor(const NewDoctor& input) {
  require(!trimmed(input.name).empty(), "doctor name is required");
  DoctorProfile d{random_id(), trimmed(input.name), input.center, input.contact, clock_()};
  std::unique_lock lock(index_mutex_);
  repository_->save_doctor(d);
  doctors_.emplace(d.id, d);
  return d;
}

PatientProfile DiaryStore::create_patient(const NewPatient& input) {
  require(!trimmed(input.name).empty(), "patient name is required");
  auto now = clock_();
  require(input.date_of_birth <= now.date(), "date of birth is in the future");

  PatientRecord record;
  record.profile = {random_id(),     trimmed(input.name), input.date_of_birth, input.sex,
                    OnsetCategory::Unassigned, input.doctor_id, false, input.history_notes,
                    input.contact,   now};

  std::unique_lock lock(index_mutex_);
  if (input.doctor_id && !doctors_.contains(*input.doctor_id)) {
    throw Error(ErrorCode::UnknownDoctor, "unknown doctor " + *input.doctor_id);
  }
  repository_->save_patient(record);
  auto s = std::make_shared<Slot>();
  s->record = record;
  patients_.emplace(record.profile.id, std::move(s));
  return record.profile;
}

std::optional<DoctorProfile> DiaryStore::find_doctor(const std::string& id) const {
  std::shared_lock lock(index_mutex_);
  auto it = doctors_.find(id);
  if (it == doctors_.end()) return std::nullopt;
  return it->second;
}

DoctorProfile DiaryStore::doctor(const std::string& id) const {
  auto d = find_doctor(id);
  if (!d) throw Error(ErrorCode::UnknownDoctor, "unknown doctor " + id);
  return *d;
}

std::shared_ptr<DiaryStore::Slot> DiaryStore::slot(const std::string& patient_id) const {
  std::shared_lock lock(index_mutex_);
  auto it = patients_.find(patient_id);
  if (it == patients_.end()) throw Error(ErrorCode::UnknownPatient, "unknown patient " + patient_id);
  return it->second;
}

bool DiaryStore::patient_exists(const std::string& id) const {
  std::shared_lock lock(index_mutex_);
  return patients_.contains(id);
}

PatientRecord DiaryStore::read(const std::string& patient_id) const {
  auto s = slot(patient_id);
  std::shared_lock lock(s->mutex);
  return s->record;
}

PatientProfile DiaryStore::patient(const std::string& id) const {
  auto s = slot(id);
  std::shared_lock lock(s->mutex);
  return s->record.profile;
}

PatientRecord DiaryStore::snapshot(const std::string& patient_id) const { return read(patient_id); }

std::vector<std::string> DiaryStore::patient_ids() const {
  std::shared_lock lock(index_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : patients_) ids.push_back(id);
  return ids;
}

std::vector<PatientProfile> DiaryStore::patients_of(const std::string& doctor_id) const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::shared_lock lock(index_mutex_);
    for (const auto& [id, s] : patients_) slots.push_back(s);
  }
  std::vector<PatientProfile> out;
  for (const auto& s : slots) {
    std::shared_lock lock(s->mutex);
    if (s->record.profile.doctor_id == doctor_id) out.push_back(s->record.profile);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.name, a.id) < std::tie(b.name, b.id);
  });
  return out;
}

template <typename Fn>
auto DiaryStore::write(const std::string& patient_id, Fn&& fn) {
  auto s = slot(patient_id);
  std::unique_lock lock(s->mutex);
  PatientRecord draft = s->record;
  auto result = fn(draft);
  repository_->save_patient(draft);
  s->record = std::move(draft);
  return result;
}

// ---- authorization ----------------------------------------------------------

void DiaryStore::require_patient_or_doctor(const Actor& actor, const PatientProfile& p) const {
  if (actor.role == Role::Patient) {
    if (actor.id != p.id) throw Error(ErrorCode::Forbidden, "patients may only access their own records");
    return;
  }
  if (p.doctor_id != actor.id) throw Error(ErrorCode::NotLinked, "doctor is not linked to this patient");
}

void DiaryStore::require_linked_doctor(const Actor& actor, const PatientProfile& p) const {
  if (actor.role != Role::Doctor) throw Error(ErrorCode::Forbidden, "only the linked doctor may do this");
  if (p.doctor_id != actor.id) throw Error(ErrorCode::NotLinked, "doctor is not linked to this patient");
}

void DiaryStore::require_not_future(Date date) const {
  if (date > clock_().date()) throw Error(ErrorCode::FutureDate, "date " + date.to_string() + " is in the future");
}

void DiaryStore::authorize_read(const Actor& actor, const std::string& patient_id) const {
  require_patient_or_doctor(actor, patient(patient_id));
}

// ---- writes -----------------------------------------------------------------

EntryWrite DiaryStore::record_entry(const Actor& actor, const std::string& patient_id, Date date,
                                    UrineProteinGrade grade, std::string symptoms) {
  return write(patient_id, [&](PatientRecord& r) {
    require_patient_or_doctor(actor, r.profile);
    require_not_future(date);
    EntryWrite out;
    out.before = r.entries;
    DiaryEntry e{random_id(), patient_id, date, grade, std::move(symptoms), actor.role, clock_()};
    auto it = std::lower_bound(r.entries.begin(), r.entries.end(), date,
                               [](const DiaryEntry& x, Date d) { return x.date < d; });
    // Same-day re-entry replaces the earlier reading.
    if (it != r.entries.end() && it->date == date) {
      *it = e;
    } else {
      r.entries.insert(it, e);
    }
    out.entry = e;
    out.after = r.entries;
    return out;
  });
}

ClinicalMeasurement DiaryStore::record_measurement(const Actor& actor, const std::string& patient_id,
                                                   const MeasurementInput& in) {
  require(in.systolic.has_value() == in.diastolic.has_value(), "systolic and diastolic must be given together");
  require(in.systolic || in.height_cm || in.weight_kg, "measurement needs at least one of BP, height, weight");
  if (in.systolic) require(*in.systolic > *in.diastolic && *in.diastolic > 0, "require systolic > diastolic > 0");
  if (in.height_cm) require(*in.height_cm > 0, "height must be positive");
  if (in.weight_kg) require(*in.weight_kg > 0, "weight must be positive");
  return write(patient_id, [&](PatientRecord& r) {
    require_linked_doctor(actor, r.profile);
    require_not_future(in.date);
    ClinicalMeasurement m{random_id(), patient_id,   in.date,  in.systolic, in.diastolic, in.height_cm,
                          in.weight_kg, in.comments, actor.id, clock_()};
    r.measurements.push_back(m);
    return m;
  });
}

Prescription DiaryStore::add_prescription(const Actor& actor, const std::string& patient_id,
                                          const PrescriptionInput& in) {
  require(!trimmed(in.medicine_name).empty(), "medicine name is required");
  require(in.frequency >= 1, "frequency must be at least one dose per day");
  require(in.dose >= 0, "dose must not be negative");
  require(!in.end || *in.end >= in.start, "prescription end precedes its start");
  return write(patient_id, [&](PatientRecord& r) {
    require_linked_doctor(actor, r.profile);
    Prescription p{random_id(), patient_id, trimmed(in.medicine_name), in.category, in.dose, in.dose_unit,
                   in.frequency, in.start,  in.end,  actor.id,    clock_()};
    r.prescriptions.push_back(p);
    return p;
  });
}

DoseEvent DiaryStore::record_dose(const Actor& actor, const std::string& patient_id,
                                  const std::string& prescription_id, Date date, bool taken) {
  return write(patient_id, [&](PatientRecord& r) {
    require_patient_or_doctor(actor, r.profile);
    const auto* p = r.find_prescription(prescription_id);
    if (!p) throw Error(ErrorCode::UnknownRecord, "unknown prescription " + prescription_id);
    require(p->active_on(date), "dose date is outside the prescription period");
    require_not_future(date);
    DoseEvent d{random_id(), prescription_id, patient_id, date, taken, clock_()};
    auto it = std::find_if(r.doses.begin(), r.doses.end(), [&](const DoseEvent& x) {
      return x.prescription_id == prescription_id && x.date == date;
    });
    if (it != r.doses.end()) {
      d.id = it->id;
      *it = d;
    } else {
      r.doses.push_back(d);
    }
    return d;
  });
}

ReportUpload DiaryStore::add_report(const Actor& actor, const std::string& patient_id, std::string_view content,
                                    std::string media_type, std::string caption) {
  require(!content.empty(), "report image is empty");
  require(content.size() <= options_.max_image_bytes,
          "report image exceeds " + std::to_string(options_.max_image_bytes) + " bytes");
  require(kReportMediaTypes.contains(media_type), "unsupported media type '" + media_type + "'");
  authorize_read(actor, patient_id);
  auto ref = blobs_->put(content);
  return write(patient_id, [&](PatientRecord& r) {
    require_patient_or_doctor(actor, r.profile);
    ReportUpload u{random_id(), patient_id, ref, std::move(media_type), content.size(), std::move(caption),
                   actor.role, clock_()};
    r.reports.push_back(u);
    return u;
  });
}

std::string DiaryStore::report_content(const Actor& actor, const std::string& patient_id,
                                       const std::string& report_id) const {
  auto r = read(patient_id);
  require_patient_or_doctor(actor, r.profile);
  for (const auto& rep : r.reports) {
    if (rep.id == report_id) {
      auto data = blobs_->get(rep.blob_ref);
      if (!data) throw Error(ErrorCode::Storage, "blob " + rep.blob_ref + " is missing");
      return *data;
    }
  }
  throw Error(ErrorCode::UnknownRecord, "unknown report " + report_id);
}

AdviceMessage DiaryStore::add_advice(const Actor& actor, const std::string& patient_id, std::string text) {
  require(!trimmed(text).empty(), "advice text is empty");
  return write(patient_id, [&](PatientRecord& r) {
    require_patient_or_doctor(actor, r.profile);
    AdviceMessage a{random_id(), patient_id, std::move(text), actor.role, actor.id, clock_()};
    r.advice.push_back(a);
    return a;
  });
}

TestOrder DiaryStore::add_test_order(const Actor& actor, const std::string& patient_id,
                                     std::vector<std::string> tests, std::string comments) {
  std::erase_if(tests, [](const std::string& t) { return trimmed(t).empty(); });
  require(!tests.empty(), "at least one test name is required");
  return write(patient_id, [&](PatientRecord& r) {
    require_linked_doctor(actor, r.profile);
    TestOrder t{random_id(), patient_id, std::move(tests), std::move(comments), actor.id, clock_()};
    r.tests.push_back(t);
    return t;
  });
}

PatientProfile DiaryStore::set_onset_category(const Actor& actor, const std::string& patient_id,
                                              OnsetCategory category) {
  return write(patient_id, [&](PatientRecord& r) {
    require_linked_doctor(actor, r.profile);
    r.profile.onset_category = category;
    return r.profile;
  });
}

PatientProfile DiaryStore::set_history_notes(const Actor& actor, const std::string& patient_id, std::string notes) {
  return write(patient_id, [&](PatientRecord& r) {
    require_linked_doctor(actor, r.profile);
    r.profile.history_notes = std::move(notes);
    return r.profile;
  });
}

PatientProfile DiaryStore::transfer_patient(const std::string& patient_id, const std::string& new_doctor_id) {
  if (!find_doctor(new_doctor_id)) throw Error(ErrorCode::UnknownDoctor, "unknown doctor " + new_doctor_id);
  auto current = patient(patient_id);
  if (current.doctor_id == new_doctor_id) return current;
  return write(patient_id, [&](PatientRecord& r) {
    if (r.profile.doctor_id != new_doctor_id) {
      r.profile.doctor_id = new_doctor_id;
      r.profile.verified = false;
    }
    return r.profile;
  });
}

PatientProfile DiaryStore::verify_patient(const std::string& doctor_id, const std::string& patient_id) {
  auto current = patient(patient_id);
  if (current.doctor_id != doctor_id) throw Error(ErrorCode::NotLinked, "doctor is not linked to this patient");
  if (current.verified) return current;
  return write(patient_id, [&](PatientRecord& r) {
    require_linked_doctor(Actor::doctor(doctor_id), r.profile);
    r.profile.verified = true;
    return r.profile;
  });
}

bool DiaryStore::append_notification(const NotificationRecord& record) {
  auto s = slot(record.patient_id);
  std::unique_lock lock(s->mutex);
  auto& feed = s->record.notifications;
  if (std::any_of(feed.begin(), feed.end(),
                  [&](const NotificationRecord& n) { return n.idempotency_key == record.idempotency_key; })) {
    return false;
  }
  PatientRecord draft = s->record;
  draft.notifications.push_back(record);
  repository_->save_patient(draft);
  s->record = std::move(draft);
  return true;
}

// ---- reads ------------------------------------------------------------------

std::vector<TimelineItem> DiaryStore::timeline(const Actor& actor, const std::string& patient_id,
                                               const DateRange& range) const {
  auto r = read(patient_id);
  require_patient_or_doctor(actor, r.profile);
  // Doctor-only alerts stay out of the patient's view; doctors see the whole feed.
  if (actor.role == Role::Patient) {
    std::erase_if(r.notifications, [](const NotificationRecord& n) { return !n.visible_to(Role::Patient); });
  }
  return build_timeline(r, range);
}

std::string DiaryStore::export_csv(const std::string& patient_id) const { return diary::export_csv(read(patient_id)); }

std::string DiaryStore::export_csv(const Actor& actor, const std::string& patient_id) const {
  auto r = read(patient_id);
  require_patient_or_doctor(actor, r.profile);
  return diary::export_csv(r);
}

RecordCounts DiaryStore::counts(const std::string& patient_id) const { return count_records(read(patient_id)); }

std::vector<std::string> DiaryStore::audit() const {
  std::vector<std::string> problems;
  auto is_doctor = [&](const std::string& id) { return find_doctor(id).has_value(); };
  for (const auto& id : patient_ids()) {
    auto r = read(id);
    const auto& p = r.profile;
    auto bad = [&](const std::string& what) { problems.push_back("patient " + id + ": " + what); };
    if (p.id != id) bad("profile id mismatch");
    if (p.doctor_id && !is_doctor(*p.doctor_id)) bad("doctor " + *p.doctor_id + " does not resolve");
    if (p.verified && !p.doctor_id) bad("verified without a doctor");
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      if (r.entries[i].patient_id != id) bad("entry " + r.entries[i].id + " has foreign parent");
      if (i > 0 && !(r.entries[i - 1].date < r.entries[i].date)) bad("entries not unique and ascending by date");
    }
    for (const auto& m : r.measurements) {
      if (m.patient_id != id) bad("measurement " + m.id + " has foreign parent");
      if (!is_doctor(m.recorded_by)) bad("measurement " + m.id + " author does not resolve");
    }
    for (const auto& rx : r.prescriptions) {
      if (rx.patient_id != id) bad("prescription " + rx.id + " has foreign parent");
      if (!is_doctor(rx.prescribed_by)) bad("prescription " + rx.id + " prescriber does not resolve");
    }
    std::set<std::pair<std::string, Date>> dose_keys;
    for (const auto& d : r.doses) {
      const auto* rx = r.find_prescription(d.prescription_id);
      if (d.patient_id != id || !rx) bad("dose " + d.id + " does not resolve to a prescription");
      else if (!rx->active_on(d.date)) bad("dose " + d.id + " outside prescription period");
      if (!dose_keys.insert({d.prescription_id, d.date}).second) bad("duplicate dose for one prescription/date");
    }
    for (const auto& rep : r.reports) {
      if (rep.patient_id != id) bad("report " + rep.id + " has foreign parent");
      if (!blobs_->contains(rep.blob_ref)) bad("report " + rep.id + " blob missing");
    }
    for (const auto& a : r.advice) {
      if (a.patient_id != id) bad("advice " + a.id + " has foreign parent");
    }
    for (const auto& t : r.tests) {
      if (t.patient_id != id) bad("test order " + t.id + " has foreign parent");
    }
    std::set<std::string> keys;
    for (const auto& n : r.notifications) {
      if (n.patient_id != id) bad("notification " + n.id + " has foreign parent");
      if (!keys.insert(n.idempotency_key).second) bad("duplicate notification key " + n.idempotency_key);
    }
  }
  return problems;
}

}  // namespace utsarjan::diary
