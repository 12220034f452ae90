#pragma once

#include <json.hpp>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "utsarjan/api/assessment.hpp"
#include "utsarjan/api/auth.hpp"
#include "utsarjan/api/http.hpp"
#include "utsarjan/api/mailer.hpp"
#include "utsarjan/diary/store.hpp"
#include "utsarjan/notify/dispatch.hpp"

namespace utsarjan::api {

struct ServiceOptions {
  std::uint64_t hash_cost = 2;
  std::size_t hash_memory_bytes = 64 * 1024 * 1024;
  std::chrono::seconds token_ttl = std::chrono::hours(24);
  std::size_t min_password_length = 8;
  OtpPolicy otp;
};

struct ServiceDeps {
  std::shared_ptr<diary::DiaryStore> store;
  std::shared_ptr<const rules::BpReferenceTable> bp_table;
  std::shared_ptr<const rules::GrowthReferenceTable> growth_table;
  std::shared_ptr<Mailer> mailer = std::make_shared<NullMailer>();
  notify::SinkList sinks;
  notify::RetryPolicy retry;
  std::size_t sink_queue_capacity = 1024;
  notify::Sleeper sleeper = notify::thread_sleeper();
  notify::AsyncDispatcher::Observer sink_observer;
  /// Array of {name, address, phone, lat, lon}.
  nlohmann::json hospitals = nlohmann::json::array();
  std::optional<std::filesystem::path> credentials_file;
  Clock clock = system_clock();
};

/// Validates and normalises a hospital list. Throws std::invalid_argument.
nlohmann::json validate_hospitals(const nlohmann::json& list);

/// The HTTP/JSON contract, independent of any server library. Thread-safe.
class ApiService {
 public:
  ApiService(ServiceDeps deps, ServiceOptions options = {});
  ~ApiService();

  Response handle(const Request& request);

  /// Waits until external sinks have seen every submitted notification.
  void flush_notifications();
  diary::DiaryStore& store() { return *store_; }

 private:
  struct Context;
  using Handler = Response (ApiService::*)(Context&);
  struct Route {
    std::string method;
    std::vector<std::string> pattern;
    bool requires_auth;
    Handler handler;
  };

  Response dispatch_route(const Request& request);
  std::vector<bool> publish(const std::vector<notify::NotificationEvent>& events);
  nlohmann::json feed_json(const diary::NotificationRecord& record) const;
  nlohmann::json timeline_item_json(const diary::TimelineItem& item, const diary::PatientRecord& record) const;
  void require_linked_doctor(const Context& ctx, const std::string& patient_id) const;
  void require_doctor_self(const Context& ctx, const std::string& doctor_id) const;

  Response healthz(Context&);
  Response register_patient(Context&);
  Response register_doctor(Context&);
  Response login(Context&);
  Response otp_request(Context&);
  Response otp_verify(Context&);
  Response hospitals(Context&);
  Response get_doctor(Context&);
  Response doctor_patients(Context&);
  Response doctor_overview(Context&);
  Response doctor_notifications(Context&);
  Response get_patient(Context&);
  Response post_entry(Context&);
  Response post_measurement(Context&);
  Response post_prescription(Context&);
  Response get_prescriptions(Context&);
  Response post_dose(Context&);
  Response post_report(Context&);
  Response list_reports(Context&);
  Response get_report(Context&);
  Response post_advice(Context&);
  Response post_tests(Context&);
  Response post_notify(Context&);
  Response post_transfer(Context&);
  Response post_verify(Context&);
  Response post_details(Context&);
  Response get_timeline(Context&);
  Response get_export(Context&);
  Response get_notifications(Context&);

  std::shared_ptr<diary::DiaryStore> store_;
  Assessor assessor_;
  nlohmann::json hospitals_;
  Clock clock_;
  ServiceOptions options_;
  PasswordHasher hasher_;
  std::string dummy_hash_;
  CredentialStore credentials_;
  SessionManager sessions_;
  OtpService otp_;
  std::mutex registration_mutex_;
  std::unique_ptr<notify::AsyncDispatcher> dispatcher_;
  std::vector<Route> routes_;
};

}  // namespace utsarjan::api
