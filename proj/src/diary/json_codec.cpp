#include "utsarjan/diary/json_codec.hpp"

#include <stdexcept>

namespace utsarjan {

void to_json(nlohmann::json& j, const Date& d) { j = d.to_string(); }
void from_json(const nlohmann::json& j, Date& d) { d = Date::parse(j.get<std::string>()); }
void to_json(nlohmann::json& j, const Timestamp& t) { j = t.to_string(); }
void from_json(const nlohmann::json& j, Timestamp& t) { t = Timestamp::parse(j.get<std::string>()); }

}  // namespace utsarjan

namespace utsarjan::diary {

using nlohmann::json;

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

template <typename E, typename Parse>
E get_enum(const json& j, const char* key, Parse parse) {
  auto v = parse(j.at(key).get<std::string>());
  if (!v) throw std::invalid_argument(std::string("bad value for ") + key);
  return *v;
}

}  // namespace

void to_json(json& j, const PatientProfile& p) {
  j = json{{"id", p.id},
           {"name", p.name},
           {"date_of_birth", p.date_of_birth},
           {"sex", rules::to_string(p.sex)},
           {"onset_category", to_string(p.onset_category)},
           {"doctor_id", opt(p.doctor_id)},
           {"verified", p.verified},
           {"history_notes", p.history_notes},
           {"contact", p.contact},
           {"created_at", p.created_at}};
}

void from_json(const json& j, PatientProfile& p) {
  p.id = j.at("id").get<std::string>();
  p.name = j.at("name").get<std::string>();
  p.date_of_birth = j.at("date_of_birth").get<Date>();
  p.sex = get_enum<Sex>(j, "sex", rules::parse_sex);
  p.onset_category = get_enum<OnsetCategory>(j, "onset_category", parse_onset_category);
  p.doctor_id = get_opt<std::string>(j, "doctor_id");
  p.verified = j.at("verified").get<bool>();
  p.history_notes = j.value("history_notes", "");
  p.contact = j.value("contact", "");
  p.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const DoctorProfile& d) {
  j = json{{"id", d.id}, {"name", d.name}, {"center", d.center}, {"contact", d.contact}, {"created_at", d.created_at}};
}

void from_json(const json& j, DoctorProfile& d) {
  d.id = j.at("id").get<std::string>();
  d.name = j.at("name").get<std::string>();
  d.center = j.value("center", "");
  d.contact = j.value("contact", "");
  d.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const DiaryEntry& e) {
  j = json{{"id", e.id},
           {"patient_id", e.patient_id},
           {"date", e.date},
           {"grade", rules::to_string(e.grade)},
           {"symptoms", e.symptoms},
           {"author_role", to_string(e.author_role)},
           {"created_at", e.created_at}};
}

void from_json(const json& j, DiaryEntry& e) {
  e.id = j.at("id").get<std::string>();
  e.patient_id = j.at("patient_id").get<std::string>();
  e.date = j.at("date").get<Date>();
  e.grade = get_enum<UrineProteinGrade>(j, "grade", rules::parse_grade);
  e.symptoms = j.value("symptoms", "");
  e.author_role = get_enum<Role>(j, "author_role", parse_role);
  e.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const ClinicalMeasurement& m) {
  j = json{{"id", m.id},
           {"patient_id", m.patient_id},
           {"date", m.date},
           {"systolic", opt(m.systolic)},
           {"diastolic", opt(m.diastolic)},
           {"height_cm", opt(m.height_cm)},
           {"weight_kg", opt(m.weight_kg)},
           {"comments", m.comments},
           {"recorded_by", m.recorded_by},
           {"created_at", m.created_at}};
}

void from_json(const json& j, ClinicalMeasurement& m) {
  m.id = j.at("id").get<std::string>();
  m.patient_id = j.at("patient_id").get<std::string>();
  m.date = j.at("date").get<Date>();
  m.systolic = get_opt<int>(j, "systolic");
  m.diastolic = get_opt<int>(j, "diastolic");
  m.height_cm = get_opt<double>(j, "height_cm");
  m.weight_kg = get_opt<double>(j, "weight_kg");
  m.comments = j.value("comments", "");
  m.recorded_by = j.value("recorded_by", "");
  m.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const Prescription& p) {
  j = json{{"id", p.id},
           {"patient_id", p.patient_id},
           {"medicine_name", p.medicine_name},
           {"category", to_string(p.category)},
           {"dose", p.dose},
           {"dose_unit", p.dose_unit},
           {"frequency", p.frequency},
           {"start", p.start},
           {"end", opt(p.end)},
           {"prescribed_by", p.prescribed_by},
           {"created_at", p.created_at}};
}

void from_json(const json& j, Prescription& p) {
  p.id = j.at("id").get<std::string>();
  p.patient_id = j.at("patient_id").get<std::string>();
  p.medicine_name = j.at("medicine_name").get<std::string>();
  p.category = get_enum<MedicineCategory>(j, "category", parse_medicine_category);
  p.dose = j.at("dose").get<double>();
  p.dose_unit = j.value("dose_unit", "");
  p.frequency = j.at("frequency").get<int>();
  p.start = j.at("start").get<Date>();
  p.end = get_opt<Date>(j, "end");
  p.prescribed_by = j.value("prescribed_by", "");
  p.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const DoseEvent& d) {
  j = json{{"id", d.id},
           {"prescription_id", d.prescription_id},
           {"patient_id", d.patient_id},
           {"date", d.date},
           {"taken", d.taken},
           {"recorded_at", d.recorded_at}};
}

void from_json(const json& j, DoseEvent& d) {
  d.id = j.at("id").get<std::string>();
  d.prescription_id = j.at("prescription_id").get<std::string>();
  d.patient_id = j.at("patient_id").get<std::string>();
  d.date = j.at("date").get<Date>();
  d.taken = j.at("taken").get<bool>();
  d.recorded_at = j.at("recorded_at").get<Timestamp>();
}

void to_json(json& j, const ReportUpload& r) {
  j = json{{"id", r.id},
           {"patient_id", r.patient_id},
           {"blob_ref", r.blob_ref},
           {"media_type", r.media_type},
           {"size_bytes", r.size_bytes},
           {"caption", r.caption},
           {"author_role", to_string(r.author_role)},
           {"created_at", r.created_at}};
}

void from_json(const json& j, ReportUpload& r) {
  r.id = j.at("id").get<std::string>();
  r.patient_id = j.at("patient_id").get<std::string>();
  r.blob_ref = j.at("blob_ref").get<std::string>();
  r.media_type = j.at("media_type").get<std::string>();
  r.size_bytes = j.at("size_bytes").get<std::size_t>();
  r.caption = j.value("caption", "");
  r.author_role = get_enum<Role>(j, "author_role", parse_role);
  r.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const AdviceMessage& a) {
  j = json{{"id", a.id},
           {"patient_id", a.patient_id},
           {"text", a.text},
           {"author_role", to_string(a.author_role)},
           {"author_id", a.author_id},
           {"created_at", a.created_at}};
}

void from_json(const json& j, AdviceMessage& a) {
  a.id = j.at("id").get<std::string>();
  a.patient_id = j.at("patient_id").get<std::string>();
  a.text = j.at("text").get<std::string>();
  a.author_role = get_enum<Role>(j, "author_role", parse_role);
  a.author_id = j.value("author_id", "");
  a.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const TestOrder& t) {
  j = json{{"id", t.id},           {"patient_id", t.patient_id}, {"tests", t.tests},
           {"comments", t.comments}, {"ordered_by", t.ordered_by}, {"created_at", t.created_at}};
}

void from_json(const json& j, TestOrder& t) {
  t.id = j.at("id").get<std::string>();
  t.patient_id = j.at("patient_id").get<std::string>();
  t.tests = j.at("tests").get<std::vector<std::string>>();
  t.comments = j.value("comments", "");
  t.ordered_by = j.value("ordered_by", "");
  t.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const NotificationRecord& n) {
  j = json{{"id", n.id},
           {"idempotency_key", n.idempotency_key},
           {"patient_id", n.patient_id},
           {"kind", n.kind},
           {"recipient_role", to_string(n.recipient)},
           {"body", n.body},
           {"message_key", n.message_key},
           {"source_id", n.source_id},
           {"created_at", n.created_at}};
}

void from_json(const json& j, NotificationRecord& n) {
  n.id = j.at("id").get<std::string>();
  n.idempotency_key = j.at("idempotency_key").get<std::string>();
  n.patient_id = j.at("patient_id").get<std::string>();
  n.kind = j.at("kind").get<std::string>();
  n.recipient = get_enum<Recipient>(j, "recipient_role", parse_recipient);
  n.body = j.at("body").get<std::string>();
  n.message_key = j.value("message_key", "");
  n.source_id = j.value("source_id", "");
  n.created_at = j.at("created_at").get<Timestamp>();
}

void to_json(json& j, const PatientRecord& r) {
  j = json{{"profile", r.profile},   {"entries", r.entries}, {"measurements", r.measurements},
           {"prescriptions", r.prescriptions}, {"doses", r.doses},     {"reports", r.reports},
           {"advice", r.advice},     {"tests", r.tests},     {"notifications", r.notifications}};
}

void from_json(const json& j, PatientRecord& r) {
  r.profile = j.at("profile").get<PatientProfile>();
  r.entries = j.value("entries", std::vector<DiaryEntry>{});
  r.measurements = j.value("measurements", std::vector<ClinicalMeasurement>{});
  r.prescriptions = j.value("prescriptions", std::vector<Prescription>{});
  r.doses = j.value("doses", std::vector<DoseEvent>{});
  r.reports = j.value("reports", std::vector<ReportUpload>{});
  r.advice = j.value("advice", std::vector<AdviceMessage>{});
  r.tests = j.value("tests", std::vector<TestOrder>{});
  r.notifications = j.value("notifications", std::vector<NotificationRecord>{});
}

}  // namespace utsarjan::diary
