#pragma once

// Documented route x caller matrix. Every cell runs against a fresh world so
// that writes in one cell (transfer in particular) cannot leak into another.

#include <array>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "api_fixture.hpp"

namespace fixture {

enum class Who { PatientSelf, PatientOther, LinkedDoctor, UnlinkedDoctor, Anonymous };

inline constexpr std::array kEveryone{Who::PatientSelf, Who::PatientOther, Who::LinkedDoctor, Who::UnlinkedDoctor,
                                      Who::Anonymous};

inline std::string_view to_string(Who who) {
  switch (who) {
    case Who::PatientSelf: return "patient-self";
    case Who::PatientOther: return "patient-other";
    case Who::LinkedDoctor: return "linked-doctor";
    case Who::UnlinkedDoctor: return "unlinked-doctor";
    case Who::Anonymous: return "anonymous";
  }
  return "?";
}

/// d1 is linked to p1 (the subject) and p2; d2 has no patients.
struct World {
  Account d1, d2, p1, p2;
  std::string rx_id;
  std::string report_id;

  const std::string& token(Who who) const {
    static const std::string none;
    switch (who) {
      case Who::PatientSelf: return p1.token;
      case Who::PatientOther: return p2.token;
      case Who::LinkedDoctor: return d1.token;
      case Who::UnlinkedDoctor: return d2.token;
      case Who::Anonymous: return none;
    }
    return none;
  }
};

inline World build_world(ApiHarness& h) {
  World w;
  h.morning_of("2024-03-01");
  w.d1 = h.doctor("Dr. Linked");
  w.d2 = h.doctor("Dr. Elsewhere");
  w.p1 = h.patient("Subject Child", w.d1.id);
  w.p2 = h.patient("Other Child", w.d1.id);
  auto rx = h.post("/patients/" + w.p1.id + "/prescriptions",
                   {{"medicine_name", "Prednisolone"}, {"category", "Steroid"}, {"dose", 20}, {"dose_unit", "mg"},
                    {"frequency", 1}, {"start", "2024-03-01"}},
                   w.d1.token);
  w.rx_id = rx.json()["prescription"]["id"];
  auto report = h.post("/patients/" + w.p1.id + "/reports",
                       {{"media_type", "image/png"}, {"content_base64", "iVBORw0KGgo="}, {"caption", "scan"}},
                       w.p1.token);
  w.report_id = report.json()["report"]["id"];
  return w;
}

struct RouteCase {
  std::string method;
  std::string path;  // {p} subject patient, {d} linked doctor, {r} report id
  std::function<json(ApiHarness&, const World&)> body;
  std::set<Who> allowed;  // empty set with public = true means everyone
  bool is_public = false;
  int success = 200;
};

inline std::string expand(std::string path, const World& w) {
  auto sub = [&](const std::string& key, const std::string& value) {
    for (auto pos = path.find(key); pos != std::string::npos; pos = path.find(key)) path.replace(pos, key.size(), value);
  };
  sub("{p}", w.p1.id);
  sub("{d}", w.d1.id);
  sub("{r}", w.report_id);
  return path;
}

inline const std::vector<RouteCase>& route_cases() {
  using W = const World&;
  using H = ApiHarness&;
  auto none = [](H, W) { return json(nullptr); };
  const std::set<Who> self_or_linked{Who::PatientSelf, Who::LinkedDoctor};
  const std::set<Who> linked_only{Who::LinkedDoctor};
  const std::set<Who> authenticated{Who::PatientSelf, Who::PatientOther, Who::LinkedDoctor, Who::UnlinkedDoctor};
  static const std::vector<RouteCase> cases{
      {"GET", "/healthz", none, {}, true, 200},
      {"POST", "/patients",
       [](H, W) {
         return json{{"name", "New"}, {"date_of_birth", "2019-01-01"}, {"sex", "F"},
                     {"email", "new-" + utsarjan::random_token(4) + "@mail.example"}, {"password", kPassword}};
       },
       {}, true, 201},
      {"POST", "/doctors",
       [](H, W) {
         return json{{"name", "Dr. New"}, {"center", "C"},
                     {"email", "new-" + utsarjan::random_token(4) + "@clinic.example"}, {"password", kPassword}};
       },
       {}, true, 201},
      {"POST", "/auth/login", [](H, W w) { return json{{"email", w.p1.email}, {"password", kPassword}}; }, {}, true, 200},
      {"POST", "/auth/otp/request", [](H, W w) { return json{{"email", w.p1.email}}; }, {}, true, 202},
      {"POST", "/auth/otp/verify",
       [](H h, W w) {
         h.post("/auth/otp/request", {{"email", w.p1.email}});
         auto mail = h.mailer->last_to(w.p1.email)->body;
         auto code = mail.substr(mail.find("code is ") + 8, 6);
         return json{{"email", w.p1.email}, {"code", code}};
       },
       {}, true, 200},
      {"GET", "/hospitals/nearby", none, authenticated, false, 200},
      {"GET", "/doctors/{d}", none, authenticated, false, 200},
      {"GET", "/doctors/{d}/patients", none, linked_only, false, 200},
      {"GET", "/doctors/{d}/overview", none, linked_only, false, 200},
      {"GET", "/doctors/{d}/notifications", none, linked_only, false, 200},
      {"GET", "/patients/{p}", none, self_or_linked, false, 200},
      {"POST", "/patients/{p}/entries", [](H, W) { return json{{"date", "2024-03-01"}, {"grade", "1+"}}; },
       self_or_linked, false, 201},
      {"POST", "/patients/{p}/measurements",
       [](H, W) {
         return json{{"date", "2024-03-01"}, {"systolic", 100}, {"diastolic", 60}, {"height_cm", 120.0},
                     {"weight_kg", 22.0}};
       },
       linked_only, false, 201},
      {"POST", "/patients/{p}/prescriptions",
       [](H, W) {
         return json{{"medicine_name", "Enalapril"}, {"category", "Other"}, {"dose", 2.5}, {"dose_unit", "mg"},
                     {"frequency", 2}, {"start", "2024-03-01"}};
       },
       linked_only, false, 201},
      {"GET", "/patients/{p}/prescriptions", none, self_or_linked, false, 200},
      {"POST", "/patients/{p}/doses",
       [](H, W w) { return json{{"prescription_id", w.rx_id}, {"date", "2024-03-01"}, {"taken", true}}; },
       self_or_linked, false, 201},
      {"POST", "/patients/{p}/reports",
       [](H, W) { return json{{"media_type", "application/pdf"}, {"content_base64", "JVBERi0xLjQK"}}; },
       self_or_linked, false, 201},
      {"GET", "/patients/{p}/reports", none, self_or_linked, false, 200},
      {"GET", "/patients/{p}/reports/{r}", none, self_or_linked, false, 200},
      {"POST", "/patients/{p}/advice", [](H, W) { return json{{"text", "Please continue"}}; }, self_or_linked, false,
       201},
      {"POST", "/patients/{p}/tests", [](H, W) { return json{{"tests", {"CBC"}}}; }, linked_only, false, 201},
      {"POST", "/patients/{p}/notify", [](H, W) { return json{{"body", "Call the clinic"}}; }, linked_only, false,
       202},
      {"POST", "/patients/{p}/transfer", [](H, W w) { return json{{"doctor_id", w.d2.id}}; }, {Who::PatientSelf},
       false, 200},
      {"POST", "/patients/{p}/verify", none, linked_only, false, 200},
      {"POST", "/patients/{p}/details", [](H, W) { return json{{"onset_category", "SSNS"}}; }, linked_only, false,
       200},
      {"GET", "/patients/{p}/timeline", none, self_or_linked, false, 200},
      {"GET", "/patients/{p}/export.csv", none, self_or_linked, false, 200},
      {"GET", "/patients/{p}/notifications", none, self_or_linked, false, 200},
  };
  return cases;
}

inline int expected_status(const RouteCase& c, Who who) {
  if (c.is_public) return c.success;
  if (who == Who::Anonymous) return 401;
  return c.allowed.contains(who) ? c.success : 403;
}

struct MatrixCell {
  std::string route;
  Who who;
  int expected;
  int actual;
  std::string body;
};

/// Runs every (route, caller) cell in a fresh world.
inline std::vector<MatrixCell> run_matrix(const std::filesystem::path& scratch) {
  std::vector<MatrixCell> cells;
  for (const auto& c : route_cases()) {
    for (auto who : kEveryone) {
      ApiHarness h(scratch);
      auto w = build_world(h);
      auto body = c.body(h, w);
      auto res = h.call(c.method, expand(c.path, w), body, w.token(who));
      cells.push_back({c.method + " " + c.path, who, expected_status(c, who), res.status, res.body});
    }
  }
  return cells;
}

}  // namespace fixture
