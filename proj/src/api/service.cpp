#include "utsarjan/api/service.hpp"

#include <algorithm>
#include <sstream>

#include "utsarjan/common/crypto.hpp"
#include "utsarjan/diary/json_codec.hpp"
#include "utsarjan/notify/triggers.hpp"
#include "utsarjan/rules/adherence.hpp"
#include "utsarjan/rules/errors.hpp"

namespace utsarjan::api {

using nlohmann::json;
using diary::Actor;
using diary::ErrorCode;
using notify::NotificationKind;

std::optional<std::string> Request::header(const std::string& lowercase_name) const {
  auto it = headers.find(lowercase_name);
  if (it == headers.end()) return std::nullopt;
  return it->second;
}

Response json_response(int status, const json& body) { return {status, "application/json", body.dump(), {}}; }

Response error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

struct ApiService::Context {
  const Request& req;
  std::map<std::string, std::string> params;
  std::optional<Principal> principal;

  const Principal& who() const { return *principal; }
  Actor actor() const { return {principal->role, principal->id}; }
  const std::string& param(const std::string& name) const { return params.at(name); }
};

namespace {

constexpr std::string_view kInvalidCredentials = "email or password is incorrect";

[[noreturn]] void invalid(const std::string& message) { throw HttpError(422, "validation", message); }

json body_of(const Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw HttpError(400, "invalid_json", "request body is not valid JSON");
  if (!j.is_object()) throw HttpError(400, "invalid_json", "request body must be a JSON object");
  return j;
}

bool present(const json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

std::string get_string(const json& j, const char* key) {
  if (!present(j, key) || !j.at(key).is_string()) invalid(std::string(key) + " must be a string");
  return j.at(key).get<std::string>();
}

std::string get_string_or(const json& j, const char* key, std::string fallback = {}) {
  return present(j, key) ? get_string(j, key) : fallback;
}

std::string required_text(const json& j, const char* key) {
  auto s = get_string(j, key);
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) invalid(std::string(key) + " must not be empty");
  return s;
}

std::optional<int> get_int(const json& j, const char* key) {
  if (!present(j, key)) return std::nullopt;
  if (!j.at(key).is_number_integer()) invalid(std::string(key) + " must be an integer");
  return j.at(key).get<int>();
}

std::optional<double> get_number(const json& j, const char* key) {
  if (!present(j, key)) return std::nullopt;
  if (!j.at(key).is_number()) invalid(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

Date parse_date(const std::string& text, const char* key) {
  auto d = Date::try_parse(text);
  if (!d) invalid(std::string(key) + " must be a date (YYYY-MM-DD)");
  return *d;
}

Date get_date(const json& j, const char* key) { return parse_date(get_string(j, key), key); }

std::optional<Date> get_opt_date(const json& j, const char* key) {
  if (!present(j, key)) return std::nullopt;
  return get_date(j, key);
}

template <typename T, typename Parse>
T get_enum(const json& j, const char* key, Parse parse) {
  auto v = parse(get_string(j, key));
  if (!v) invalid(std::string(key) + " has an unsupported value");
  return *v;
}

std::optional<Date> query_date(const Request& req, const char* key) {
  auto it = req.query.find(key);
  if (it == req.query.end() || it->second.empty()) return std::nullopt;
  return parse_date(it->second, key);
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    auto j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownPatient:
    case ErrorCode::UnknownDoctor:
    case ErrorCode::UnknownRecord:
      return 404;
    case ErrorCode::NotLinked:
    case ErrorCode::Forbidden:
      return 403;
    case ErrorCode::Validation:
    case ErrorCode::FutureDate:
      return 422;
    case ErrorCode::Storage:
      return 500;
  }
  return 500;
}

json relapse_json(const rules::RelapseState& s) {
  return {{"status", rules::to_string(s.status)},
          {"onset_date", s.onset_date ? json(s.onset_date->to_string()) : json(nullptr)},
          {"suspect_count", s.suspect_count}};
}

json entry_json(const diary::DiaryEntry& e) {
  json j = e;
  j["color"] = rules::to_string(rules::classify_urine_protein(e.grade));
  return j;
}

json wire_events(const std::vector<notify::NotificationEvent>& events) {
  auto out = json::array();
  for (const auto& e : events) {
    auto j = notify::to_wire_json(e);
    j["message_key"] = notify::message_key(e.kind);
    out.push_back(j);
  }
  return out;
}

json doctor_summary(const diary::DoctorProfile& d) {
  return {{"id", d.id}, {"name", d.name}, {"center", d.center}, {"contact", d.contact}};
}

json counts_json(const diary::RecordCounts& c) {
  return {{"entries", c.entries},   {"measurements", c.measurements}, {"prescriptions", c.prescriptions},
          {"doses", c.doses},       {"reports", c.reports},           {"advice", c.advice},
          {"tests", c.tests},       {"notifications", c.notifications}};
}

json latest_json(const rules::LatestAssessment& a) {
  json bands = json::array();
  for (auto b : a.growth_bands) bands.push_back(rules::to_string(b));
  return {{"urine_color", a.urine_color ? json(rules::to_string(*a.urine_color)) : json(nullptr)},
          {"bp_stage", a.bp_stage ? json(rules::to_string(*a.bp_stage)) : json(nullptr)},
          {"growth_bands", bands}};
}

std::string session_token(const Request& req) {
  auto h = req.header("authorization");
  if (!h) return {};
  constexpr std::string_view prefix = "Bearer ";
  if (h->size() <= prefix.size() || h->compare(0, prefix.size(), prefix) != 0) return {};
  return h->substr(prefix.size());
}

json session_json(const Session& s) {
  return {{"token", s.token},
          {"token_type", "Bearer"},
          {"expires_at", s.expires_at.to_string()},
          {"role", diary::to_string(s.principal.role)},
          {"principal_id", s.principal.id}};
}

}  // namespace

json validate_hospitals(const json& list) {
  if (!list.is_array()) throw std::invalid_argument("hospital list must be a JSON array");
  json out = json::array();
  for (const auto& h : list) {
    if (!h.is_object()) throw std::invalid_argument("hospital entries must be objects");
    for (const char* key : {"name", "address", "phone"}) {
      if (!h.contains(key) || !h.at(key).is_string()) {
        throw std::invalid_argument(std::string("hospital entry needs string field ") + key);
      }
    }
    for (const char* key : {"lat", "lon"}) {
      if (!h.contains(key) || !h.at(key).is_number()) {
        throw std::invalid_argument(std::string("hospital entry needs numeric field ") + key);
      }
    }
    out.push_back({{"name", h["name"]}, {"address", h["address"]}, {"phone", h["phone"]}, {"lat", h["lat"]},
                   {"lon", h["lon"]}});
  }
  return out;
}

ApiService::ApiService(ServiceDeps deps, ServiceOptions options)
    : store_(std::move(deps.store)),
      assessor_(std::move(deps.bp_table), std::move(deps.growth_table)),
      hospitals_(validate_hospitals(deps.hospitals)),
      clock_(std::move(deps.clock)),
      options_(options),
      hasher_(options.hash_cost, options.hash_memory_bytes),
      dummy_hash_(hasher_.hash(random_token(16))),
      credentials_(std::move(deps.credentials_file)),
      sessions_(clock_, options.token_ttl),
      otp_(clock_, std::move(deps.mailer), options.otp),
      dispatcher_(std::make_unique<notify::AsyncDispatcher>(std::make_shared<notify::StoreFeed>(store_),
                                                            std::move(deps.sinks), deps.retry,
                                                            deps.sink_queue_capacity, std::move(deps.sleeper),
                                                            std::move(deps.sink_observer))) {
  auto add = [this](std::string method, std::string_view path, bool auth, Handler h) {
    routes_.push_back({std::move(method), split_path(path), auth, h});
  };
  add("GET", "/healthz", false, &ApiService::healthz);
  add("POST", "/patients", false, &ApiService::register_patient);
  add("POST", "/doctors", false, &ApiService::register_doctor);
  add("POST", "/auth/login", false, &ApiService::login);
  add("POST", "/auth/otp/request", false, &ApiService::otp_request);
  add("POST", "/auth/otp/verify", false, &ApiService::otp_verify);
  add("GET", "/hospitals/nearby", true, &ApiService::hospitals);
  add("GET", "/doctors/{id}", true, &ApiService::get_doctor);
  add("GET", "/doctors/{id}/patients", true, &ApiService::doctor_patients);
  add("GET", "/doctors/{id}/overview", true, &ApiService::doctor_overview);
  add("GET", "/doctors/{id}/notifications", true, &ApiService::doctor_notifications);
  add("GET", "/patients/{id}", true, &ApiService::get_patient);
  add("POST", "/patients/{id}/entries", true, &ApiService::post_entry);
  add("POST", "/patients/{id}/measurements", true, &ApiService::post_measurement);
  add("POST", "/patients/{id}/prescriptions", true, &ApiService::post_prescription);
  add("GET", "/patients/{id}/prescriptions", true, &ApiService::get_prescriptions);
  add("POST", "/patients/{id}/doses", true, &ApiService::post_dose);
  add("POST", "/patients/{id}/reports", true, &ApiService::post_report);
  add("GET", "/patients/{id}/reports", true, &ApiService::list_reports);
  add("GET", "/patients/{id}/reports/{rid}", true, &ApiService::get_report);
  add("POST", "/patients/{id}/advice", true, &ApiService::post_advice);
  add("POST", "/patients/{id}/tests", true, &ApiService::post_tests);
  add("POST", "/patients/{id}/notify", true, &ApiService::post_notify);
  add("POST", "/patients/{id}/transfer", true, &ApiService::post_transfer);
  add("POST", "/patients/{id}/verify", true, &ApiService::post_verify);
  add("POST", "/patients/{id}/details", true, &ApiService::post_details);
  add("GET", "/patients/{id}/timeline", true, &ApiService::get_timeline);
  add("GET", "/patients/{id}/export.csv", true, &ApiService::get_export);
  add("GET", "/patients/{id}/notifications", true, &ApiService::get_notifications);
}

ApiService::~ApiService() = default;

void ApiService::flush_notifications() { dispatcher_->flush(); }

Response ApiService::handle(const Request& request) {
  try {
    return dispatch_route(request);
  } catch (const HttpError& e) {
    return error_response(e.status(), e.code(), e.what());
  } catch (const diary::Error& e) {
    return error_response(status_for(e.code()), diary::to_string(e.code()), e.what());
  } catch (const rules::DomainError& e) {
    return error_response(422, "validation", e.what());
  } catch (const rules::InvalidWindow& e) {
    return error_response(422, "validation", e.what());
  } catch (const json::exception& e) {
    return error_response(422, "validation", e.what());
  } catch (const std::invalid_argument& e) {
    return error_response(422, "validation", e.what());
  } catch (const std::exception&) {
    return error_response(500, "internal", "internal error");
  }
}

Response ApiService::dispatch_route(const Request& request) {
  auto segments = split_path(request.path);
  bool path_matched = false;
  for (const auto& route : routes_) {
    if (route.pattern.size() != segments.size()) continue;
    std::map<std::string, std::string> params;
    bool ok = true;
    for (std::size_t i = 0; i < segments.size() && ok; ++i) {
      const auto& p = route.pattern[i];
      if (p.size() > 2 && p.front() == '{' && p.back() == '}') {
        params[p.substr(1, p.size() - 2)] = segments[i];
      } else {
        ok = p == segments[i];
      }
    }
    if (!ok) continue;
    path_matched = true;
    if (route.method != request.method) continue;
    Context ctx{request, std::move(params), std::nullopt};
    if (route.requires_auth) {
      ctx.principal = sessions_.resolve(session_token(request));
      if (!ctx.principal) throw HttpError(401, "unauthenticated", "a valid bearer token is required");
    }
    return (this->*route.handler)(ctx);
  }
  if (path_matched) throw HttpError(405, "method_not_allowed", "method not allowed for this path");
  throw HttpError(404, "not_found", "no such route");
}

std::vector<bool> ApiService::publish(const std::vector<notify::NotificationEvent>& events) {
  return dispatcher_->submit(events);
}

json ApiService::feed_json(const diary::NotificationRecord& n) const {
  return {{"id", n.id},
          {"kind", n.kind},
          {"recipient_role", diary::to_string(n.recipient)},
          {"patient_id", n.patient_id},
          {"body", n.body},
          {"message_key", n.message_key},
          {"source_id", n.source_id},
          {"created_at", n.created_at.to_string()},
          {"idempotency_key", n.idempotency_key}};
}

void ApiService::require_linked_doctor(const Context& ctx, const std::string& patient_id) const {
  auto p = store_->patient(patient_id);
  if (ctx.who().role != Role::Doctor) throw diary::Error(ErrorCode::Forbidden, "only the linked doctor may do this");
  if (p.doctor_id != ctx.who().id) throw diary::Error(ErrorCode::NotLinked, "doctor is not linked to this patient");
}

void ApiService::require_doctor_self(const Context& ctx, const std::string& doctor_id) const {
  store_->doctor(doctor_id);
  if (ctx.who().role != Role::Doctor || ctx.who().id != doctor_id) {
    throw diary::Error(ErrorCode::Forbidden, "doctors may only read their own dashboard");
  }
}

// ---- public routes ----------------------------------------------------------

Response ApiService::healthz(Context&) {
  return json_response(200, {{"status", "ok"},
                             {"bp_table", assessor_.bp_table().version()},
                             {"growth_table", assessor_.growth_table().version()}});
}

Response ApiService::register_patient(Context& ctx) {
  auto j = body_of(ctx.req);
  std::string email;
  try {
    email = normalize_email(get_string(j, "email"));
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  auto password = get_string(j, "password");
  if (password.size() < options_.min_password_length) {
    invalid("password must be at least " + std::to_string(options_.min_password_length) + " characters");
  }
  diary::NewPatient input{required_text(j, "name"),
                          get_date(j, "date_of_birth"),
                          get_enum<rules::Sex>(j, "sex", rules::parse_sex),
                          present(j, "doctor_id") ? std::optional{get_string(j, "doctor_id")} : std::nullopt,
                          get_string_or(j, "history_notes"),
                          get_string_or(j, "contact")};
  auto hash = hasher_.hash(password);

  std::lock_guard lock(registration_mutex_);
  if (credentials_.contains(Role::Patient, email)) throw HttpError(409, "duplicate_email", "email already registered");
  diary::PatientProfile profile;
  try {
    profile = store_->create_patient(input);
  } catch (const diary::Error& e) {
    if (e.code() == ErrorCode::UnknownDoctor) invalid("doctor_id does not name a registered doctor");
    throw;
  }
  credentials_.add({profile.id, Role::Patient, email, hash});
  json out = profile;
  out["role"] = "patient";
  return json_response(201, out);
}

Response ApiService::register_doctor(Context& ctx) {
  auto j = body_of(ctx.req);
  std::string email;
  try {
    email = normalize_email(get_string(j, "email"));
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  auto password = get_string(j, "password");
  if (password.size() < options_.min_password_length) {
    invalid("password must be at least " + std::to_string(options_.min_password_length) + " characters");
  }
  diary::NewDoctor input{required_text(j, "name"), required_text(j, "center"), get_string_or(j, "contact")};
  auto hash = hasher_.hash(password);

  std::lock_guard lock(registration_mutex_);
  if (credentials_.contains(Role::Doctor, email)) throw HttpError(409, "duplicate_email", "email already registered");
  auto profile = store_->create_doctor(input);
  credentials_.add({profile.id, Role::Doctor, email, hash});
  json out = profile;
  out["role"] = "doctor";
  return json_response(201, out);
}

Response ApiService::login(Context& ctx) {
  auto j = body_of(ctx.req);
  auto password = get_string_or(j, "password");
  std::optional<Role> role;
  if (present(j, "role")) role = get_enum<Role>(j, "role", diary::parse_role);

  std::vector<Credential> candidates;
  try {
    auto email = normalize_email(get_string_or(j, "email"));
    if (role) {
      if (auto c = credentials_.find(*role, email)) candidates.push_back(*c);
    } else {
      candidates = credentials_.find_any(email);
    }
  } catch (const std::invalid_argument&) {
  }
  if (candidates.empty()) {
    hasher_.verify(dummy_hash_, password);
  }
  for (const auto& c : candidates) {
    if (hasher_.verify(c.password_hash, password)) {
      return json_response(200, session_json(sessions_.issue({c.role, c.principal_id})));
    }
  }
  throw HttpError(401, "invalid_credentials", std::string(kInvalidCredentials));
}

Response ApiService::otp_request(Context& ctx) {
  auto j = body_of(ctx.req);
  std::string email;
  try {
    email = normalize_email(get_string(j, "email"));
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  std::optional<Role> role;
  if (present(j, "role")) role = get_enum<Role>(j, "role", diary::parse_role);
  std::optional<Principal> principal;
  if (role) {
    if (auto c = credentials_.find(*role, email)) principal = Principal{c->role, c->principal_id};
  } else if (auto all = credentials_.find_any(email); !all.empty()) {
    principal = Principal{all.front().role, all.front().principal_id};
  }
  try {
    otp_.request(email, principal);
  } catch (const RateLimited& e) {
    throw HttpError(429, "rate_limited", e.what());
  }
  return json_response(202, {{"status", "sent"}});
}

Response ApiService::otp_verify(Context& ctx) {
  auto j = body_of(ctx.req);
  std::optional<Principal> principal;
  try {
    principal = otp_.verify(normalize_email(get_string_or(j, "email")), get_string_or(j, "code"));
  } catch (const std::invalid_argument&) {
  }
  if (!principal) throw HttpError(401, "invalid_code", "code is wrong, expired or already used");
  return json_response(200, session_json(sessions_.issue(*principal)));
}

// ---- doctor routes ----------------------------------------------------------

Response ApiService::hospitals(Context&) { return json_response(200, {{"hospitals", hospitals_}}); }

Response ApiService::get_doctor(Context& ctx) {
  return json_response(200, doctor_summary(store_->doctor(ctx.param("id"))));
}

Response ApiService::doctor_patients(Context& ctx) {
  const auto& id = ctx.param("id");
  require_doctor_self(ctx, id);
  auto list = json::array();
  for (const auto& p : store_->patients_of(id)) {
    auto record = store_->snapshot(p.id);
    json item = p;
    item["critical"] = assessor_.critical(record);
    item["relapse"] = relapse_json(notify::relapse_state_of(record.entries));
    item["assessment"] = latest_json(assessor_.latest(record));
    list.push_back(item);
  }
  return json_response(200, {{"patients", list}});
}

Response ApiService::doctor_overview(Context& ctx) {
  const auto& id = ctx.param("id");
  require_doctor_self(ctx, id);
  std::map<diary::OnsetCategory, int> counts{{diary::OnsetCategory::SSNS, 0},
                                             {diary::OnsetCategory::SRNS_IR, 0},
                                             {diary::OnsetCategory::SRNS_LR, 0},
                                             {diary::OnsetCategory::Unassigned, 0}};
  int critical = 0, total = 0;
  for (const auto& p : store_->patients_of(id)) {
    ++counts[p.onset_category];
    ++total;
    critical += assessor_.critical(store_->snapshot(p.id));
  }
  json category_counts;
  for (const auto& [category, n] : counts) category_counts[std::string(diary::to_string(category))] = n;
  return json_response(200, {{"category_counts", category_counts}, {"critical_count", critical}, {"total", total}});
}

Response ApiService::doctor_notifications(Context& ctx) {
  const auto& id = ctx.param("id");
  require_doctor_self(ctx, id);
  std::vector<diary::NotificationRecord> feed;
  for (const auto& p : store_->patients_of(id)) {
    for (auto& n : store_->snapshot(p.id).notifications) {
      if (n.visible_to(Role::Doctor)) feed.push_back(std::move(n));
    }
  }
  std::stable_sort(feed.begin(), feed.end(),
                   [](const auto& a, const auto& b) { return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id); });
  auto list = json::array();
  for (const auto& n : feed) list.push_back(feed_json(n));
  return json_response(200, {{"notifications", list}});
}

// ---- patient routes ---------------------------------------------------------

Response ApiService::get_patient(Context& ctx) {
  const auto& pid = ctx.param("id");
  store_->authorize_read(ctx.actor(), pid);
  auto record = store_->snapshot(pid);
  json out;
  out["profile"] = record.profile;
  out["doctor"] = nullptr;
  if (record.profile.doctor_id) {
    if (auto d = store_->find_doctor(*record.profile.doctor_id)) out["doctor"] = doctor_summary(*d);
  }
  out["assessment"] = latest_json(assessor_.latest(record));
  out["relapse"] = relapse_json(notify::relapse_state_of(record.entries));
  out["critical"] = assessor_.critical(record);
  out["counts"] = counts_json(diary::count_records(record));
  return json_response(200, out);
}

Response ApiService::post_entry(Context& ctx) {
  const auto& pid = ctx.param("id");
  auto j = body_of(ctx.req);
  auto date = get_date(j, "date");
  auto grade = get_enum<rules::UrineProteinGrade>(j, "grade", rules::parse_grade);
  auto w = store_->record_entry(ctx.actor(), pid, date, grade, get_string_or(j, "symptoms"));
  auto events = notify::evaluate_entry_triggers(w, clock_());
  publish(events);
  return json_response(201, {{"entry", entry_json(w.entry)},
                             {"relapse", relapse_json(notify::relapse_state_of(w.after))},
                             {"notifications", wire_events(events)}});
}

Response ApiService::post_measurement(Context& ctx) {
  const auto& pid = ctx.param("id");
  auto j = body_of(ctx.req);
  diary::MeasurementInput input{get_date(j, "date"),           get_int(j, "systolic"),
                                get_int(j, "diastolic"),       get_number(j, "height_cm"),
                                get_number(j, "weight_kg"),    get_string_or(j, "comments")};
  auto m = store_->record_measurement(ctx.actor(), pid, input);
  auto record = store_->snapshot(pid);
  auto verdict = assessor_.assess(record.profile, m, record.measurements);
  auto events = notify::evaluate_measurement_triggers(m, verdict.for_triggers(), clock_());
  publish(events);
  json mj = m;
  mj["bmi"] = verdict.bmi ? json(rules::round_display(*verdict.bmi)) : json(nullptr);
  return json_response(201, {{"measurement", mj}, {"assessment", to_json(verdict)}, {"notifications", wire_events(events)}});
}

Response ApiService::post_prescription(Context& ctx) {
  const auto& pid = ctx.param("id");
  auto j = body_of(ctx.req);
  diary::PrescriptionInput input{required_text(j, "medicine_name"),
                                 get_enum<diary::MedicineCategory>(j, "category", diary::parse_medicine_category),
                                 get_number(j, "dose").value_or(0),
                                 get_string_or(j, "dose_unit"),
                                 get_int(j, "frequency").value_or(1),
                                 get_date(j, "start"),
                                 get_opt_date(j, "end")};
  auto rx = store_->add_prescription(ctx.actor(), pid, input);
  std::string body = "New prescription: " + rx.label() + ", " + std::to_string(rx.frequency) + " per day from " +
                     rx.start.to_string() + (rx.end ? " to " + rx.end->to_string() : "") + ".";
  std::vector events{notify::make_event(NotificationKind::MedicineUpdated, pid, rx.id, body, clock_())};
  publish(events);
  return json_response(201, {{"prescription", rx}, {"notifications", wire_events(events)}});
}

Response ApiService::get_prescriptions(Context& ctx) {
  const auto& pid = ctx.param("id");
  store_->authorize_read(ctx.actor(), pid);
  auto record = store_->snapshot(pid);
  auto from = query_date(ctx.req, "from");
  auto to = query_date(ctx.req, "to");
  if (from && to && *from > *to) throw HttpError(422, "validation", "from must not be after to");
  Date today = clock_().date();
  auto list = json::array();
  for (const auto& rx : record.prescriptions) {
    json item = rx;
    item["label"] = rx.label();
    item["active"] = rx.active_on(today);
    Date w0 = from.value_or(rx.start);
    Date w1 = to.value_or(rx.end ? std::min(*rx.end, today) : today);
    if (w0 <= w1) {
      std::vector<rules::DoseFact> facts;
      for (const auto& d : record.doses) {
        if (d.prescription_id == rx.id) facts.push_back({d.date, d.taken});
      }
      auto a = rules::adherence_rate({rx.start, rx.end, rx.frequency}, facts, w0, w1);
      item["adherence"] = {{"start", a.start.to_string()},
                           {"end", a.end.to_string()},
                           {"expected_doses", a.expected_doses},
                           {"taken_doses", a.taken_doses},
                           {"rate", a.rate}};
    } else {
      item["adherence"] = nullptr;
    }
    list.push_back(item);
  }
  return json_response(200, {{"prescriptions", list}});
}

Response ApiService::post_dose(Context& ctx) {
  const auto& pid = ctx.param("id");
  auto j = body_of(ctx.req);
  if (!present(j, "taken") || !j.at("taken").is_boolean()) invalid("taken must be a boolean");
  auto dose = store_->record_dose(ctx.actor(), pid, get_string(j, "prescription_id"), get_date(j, "date"),
                                  j.at("taken").get<bool>());
  return json_response(201, {{"dose", dose}});
}

Response ApiService::post_report(Context& ctx) {
  const auto& pid = ctx.param("id");
  auto j = body_of(ctx.req);
  auto media_type = get_string(j, "media_type");
  std::string content;
  try {
    content = base64_decode(get_string(j, "content_base64"));
  } catch (const std::invalid_argument&) {
    invalid("content_base64 is not valid base64");
  }
  auto report = store_->add_report(ctx.actor(), pid, content, media_type, get_string_or(j, "caption"));
  return json_response(201, {{"report", report}});
}

Response ApiService::list_reports(Context& ctx) {
  const auto& pid = ctx.param("id");
  store_->authorize_read(ctx.actor(), pid);
  return json_response(200, {{"reports", store_->snapshot(pid).reports}});
}

Response ApiService::get_report(Context& ctx) {
  const auto& pid = ctx.param("id");
  const auto& rid = ctx.param("rid");
  auto content = store_->report_content(ctx.actor(), pid, rid);
  auto record = store_->snapshot(pid);
  auto it = std::find_if(record.reports.begin(), record.reports.end(), [&](const auto& r) { return r.id == rid; });
  Response r{200, it->media_type, std::move(content), {}};
  return r;
}

Response ApiService::post_advice(Context& ctx) {
  const auto& pid = ctx.param("id");
  auto j = body_of(ctx.req);
  auto advice = store_->add_advice(ctx.actor(), pid, required_text(j, "text"));
  std::vector<notify::NotificationEvent> events;
  if (advice.author_role == Role::Doctor) {
    events.push_back(notify::make_event(NotificationKind::DoctorAdvice, pid, advice.id, advice.text, clock_()));
    publish(events);
  }
  return json_response(201, {{"advice", advice}, {"notifications", wire_events(events)}});
}

Response ApiService::post_tests(Context& ctx) {
  const auto& pid = ctx.param("id");
  auto j = body_of(ctx.req);
  if (!present(j, "tests") || !j.at("tests").is_array()) invalid("tests must be an array of strings");
  std::vector<std::string> tests;
  for (const auto& t : j.at("tests")) {
    if (!t.is_string()) invalid("tests must be an array of strings");
    tests.push_back(t.get<std::string>());
  }
  auto order = store_->add_test_order(ctx.actor(), pid, tests, get_string_or(j, "comments"));
  std::string body = "Tests ordered: ";
  for (std::size_t i = 0; i < order.tests.size(); ++i) body += (i ? ", " : "") + order.tests[i];
  if (!order.comments.empty()) body += " (" + order.comments + ")";
  std::vector events{notify::make_event(NotificationKind::TestOrdered, pid, order.id, body + ".", clock_())};
  publish(events);
  return json_response(201, {{"test_order", order}, {"notifications", wire_events(events)}});
}

Response ApiService::post_notify(Context& ctx) {
  const auto& pid = ctx.param("id");
  require_linked_doctor(ctx, pid);
  auto j = body_of(ctx.req);
  auto body = required_text(j, "body");
  auto client_key = get_string_or(j, "idempotency_key");
  std::string source = client_key.empty() ? "notify:" + random_id() : "notify:" + ctx.who().id + ":" + client_key;
  auto event = notify::make_event(NotificationKind::DoctorAdvice, pid, source, body, clock_());
  bool created = publish({event}).front();
  for (const auto& n : store_->snapshot(pid).notifications) {
    if (n.idempotency_key == event.idempotency_key) {
      return json_response(202, {{"notification", feed_json(n)}, {"created", created}});
    }
  }
  throw diary::Error(ErrorCode::Storage, "notification missing after dispatch");
}

Response ApiService::post_transfer(Context& ctx) {
  const auto& pid = ctx.param("id");
  store_->patient(pid);
  if (ctx.who().role != Role::Patient || ctx.who().id != pid) {
    throw diary::Error(ErrorCode::Forbidden, "only the patient may change doctor");
  }
  auto j = body_of(ctx.req);
  return json_response(200, store_->transfer_patient(pid, get_string(j, "doctor_id")));
}

Response ApiService::post_verify(Context& ctx) {
  const auto& pid = ctx.param("id");
  require_linked_doctor(ctx, pid);
  return json_response(200, store_->verify_patient(ctx.who().id, pid));
}

Response ApiService::post_details(Context& ctx) {
  const auto& pid = ctx.param("id");
  require_linked_doctor(ctx, pid);
  auto j = body_of(ctx.req);
  if (!present(j, "onset_category") && !present(j, "history_notes")) {
    invalid("expected onset_category and/or history_notes");
  }
  std::optional<diary::OnsetCategory> category;
  if (present(j, "onset_category")) {
    category = get_enum<diary::OnsetCategory>(j, "onset_category", diary::parse_onset_category);
  }
  std::optional<std::string> notes;
  if (present(j, "history_notes")) notes = get_string(j, "history_notes");
  diary::PatientProfile profile;
  if (category) profile = store_->set_onset_category(ctx.actor(), pid, *category);
  if (notes) profile = store_->set_history_notes(ctx.actor(), pid, *notes);
  return json_response(200, profile);
}

json ApiService::timeline_item_json(const diary::TimelineItem& item, const diary::PatientRecord& record) const {
  json j{{"kind", item.kind()},
         {"id", item.id()},
         {"date", item.date.to_string()},
         {"created_at", item.created_at.to_string()}};
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, diary::DiaryEntry>) {
          j["record"] = entry_json(r);
        } else if constexpr (std::is_same_v<T, diary::ClinicalMeasurement>) {
          auto verdict = assessor_.assess(record.profile, r, record.measurements);
          json mj = r;
          mj["bmi"] = verdict.bmi ? json(rules::round_display(*verdict.bmi)) : json(nullptr);
          mj["assessment"] = to_json(verdict);
          j["record"] = mj;
        } else if constexpr (std::is_same_v<T, diary::NotificationRecord>) {
          j["record"] = feed_json(r);
        } else {
          j["record"] = r;
        }
      },
      item.record);
  return j;
}

Response ApiService::get_timeline(Context& ctx) {
  const auto& pid = ctx.param("id");
  diary::DateRange range{query_date(ctx.req, "from"), query_date(ctx.req, "to")};
  auto items = store_->timeline(ctx.actor(), pid, range);
  auto record = store_->snapshot(pid);
  auto list = json::array();
  for (const auto& item : items) list.push_back(timeline_item_json(item, record));
  return json_response(200, {{"items", list}, {"relapse", relapse_json(notify::relapse_state_of(record.entries))}});
}

Response ApiService::get_export(Context& ctx) {
  const auto& pid = ctx.param("id");
  Response r{200, "text/csv; charset=utf-8", store_->export_csv(ctx.actor(), pid), {}};
  r.headers["Content-Disposition"] = "attachment; filename=\"diary-" + pid + ".csv\"";
  return r;
}

Response ApiService::get_notifications(Context& ctx) {
  const auto& pid = ctx.param("id");
  store_->authorize_read(ctx.actor(), pid);
  auto list = json::array();
  for (const auto& n : store_->snapshot(pid).notifications) {
    if (n.visible_to(ctx.who().role)) list.push_back(feed_json(n));
  }
  return json_response(200, {{"notifications", list}});
}

}  // namespace utsarjan::api
