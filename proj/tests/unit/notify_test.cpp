#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "store_fixture.hpp"
#include "utsarjan/notify/dispatch.hpp"
#include "utsarjan/notify/triggers.hpp"

using namespace utsarjan;
using namespace utsarjan::notify;
using diary::Actor;
using rules::Sex;
using rules::UrineProteinGrade;
using fixture::StoreHarness;
using fixture::TempDir;
using std::chrono::milliseconds;

namespace {

struct Pair {
  std::string doctor_id;
  std::string patient_id;
};

Pair linked(diary::DiaryStore& s) {
  auto d = s.create_doctor({"Dr. A", "Center", "000"});
  auto p = s.create_patient({"Child", Date{2016, 1, 1}, Sex::F, d.id, "", ""});
  return {d.id, p.id};
}

std::vector<NotificationKind> kinds(const std::vector<NotificationEvent>& events) {
  std::vector<NotificationKind> out;
  for (const auto& e : events) out.push_back(e.kind);
  return out;
}

std::vector<NotificationEvent> log_entry(StoreHarness& h, const Pair& p, Date date, UrineProteinGrade grade) {
  h.morning_of(date.to_string());
  auto w = h.store->record_entry(Actor::patient(p.patient_id), p.patient_id, date, grade, "");
  return evaluate_entry_triggers(w, h.store->now());
}

class MemoryFeed : public Feed {
 public:
  bool append(const NotificationEvent& e) override {
    for (const auto& x : items) {
      if (x.idempotency_key == e.idempotency_key) return false;
    }
    items.push_back(e);
    return true;
  }
  std::vector<NotificationEvent> items;
};

class ScriptedSink : public NotificationSink {
 public:
  ScriptedSink(std::string name, int failures) : name_(std::move(name)), failures_(failures) {}
  std::string name() const override { return name_; }
  DeliveryResult deliver(const NotificationEvent&) override {
    ++calls;
    if (failures_ < 0 || calls <= failures_) return {false, "unavailable"};
    return {true, {}};
  }
  std::atomic<int> calls{0};

 private:
  std::string name_;
  int failures_;  // negative: always fail
};

NotificationEvent sample(std::string source = "src-1") {
  return make_event(NotificationKind::HeavyProteinuria, "pat-1", std::move(source), "body",
                    Timestamp::parse("2024-03-02T08:00:00Z"));
}

}  // namespace

TEST_CASE("kinds route to the documented recipients") {
  CHECK(recipient_for(NotificationKind::HeavyProteinuria) == Recipient::Both);
  CHECK(recipient_for(NotificationKind::RelapseDetected) == Recipient::Both);
  CHECK(recipient_for(NotificationKind::BpStage2) == Recipient::Both);
  CHECK(recipient_for(NotificationKind::GrowthRed) == Recipient::Both);
  CHECK(recipient_for(NotificationKind::DoctorAdvice) == Recipient::Patient);
  CHECK(recipient_for(NotificationKind::TestOrdered) == Recipient::Patient);
  CHECK(recipient_for(NotificationKind::MedicineUpdated) == Recipient::Patient);
  for (int k = 0; k <= static_cast<int>(NotificationKind::MedicineUpdated); ++k) {
    auto kind = static_cast<NotificationKind>(k);
    CHECK(parse_kind(to_string(kind)) == kind);
  }
  CHECK_FALSE(parse_kind("Nope"));
}

TEST_CASE("idempotency key depends only on patient, kind and source") {
  auto a = sample("x");
  auto b = sample("x");
  CHECK(a.id != b.id);
  CHECK(a.idempotency_key == b.idempotency_key);
  CHECK(a.idempotency_key == sha256_hex(std::string_view("pat-1|HeavyProteinuria|x")));
  CHECK(sample("y").idempotency_key != a.idempotency_key);
}

TEST_CASE("entry triggers") {
  TempDir dir;
  StoreHarness h(dir.path);
  auto p = linked(*h.store);
  using G = UrineProteinGrade;

  SUBCASE("first heavy entry") {
    CHECK(kinds(log_entry(h, p, Date{2024, 3, 1}, G::ThreePlus)) == std::vector{NotificationKind::HeavyProteinuria});
  }
  SUBCASE("light entry") { CHECK(log_entry(h, p, Date{2024, 3, 1}, G::OnePlus).empty()); }
  SUBCASE("third consecutive heavy entry, then once per episode") {
    log_entry(h, p, Date{2024, 3, 1}, G::ThreePlus);
    log_entry(h, p, Date{2024, 3, 2}, G::FourPlus);
    auto third = log_entry(h, p, Date{2024, 3, 3}, G::ThreePlus);
    CHECK(kinds(third) == std::vector{NotificationKind::HeavyProteinuria, NotificationKind::RelapseDetected});
    CHECK(third[1].body.find("2024-03-01") != std::string::npos);
    CHECK(kinds(log_entry(h, p, Date{2024, 3, 4}, G::FourPlus)) == std::vector{NotificationKind::HeavyProteinuria});
    CHECK(log_entry(h, p, Date{2024, 3, 5}, G::Trace).empty());
    log_entry(h, p, Date{2024, 3, 6}, G::ThreePlus);
    log_entry(h, p, Date{2024, 3, 7}, G::ThreePlus);
    CHECK(kinds(log_entry(h, p, Date{2024, 3, 8}, G::ThreePlus)).back() == NotificationKind::RelapseDetected);
  }
}

TEST_CASE("relapse alerts match the number of heavy runs reaching three") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    TempDir dir;
    StoreHarness h(dir.path);
    auto p = linked(*h.store);
    std::uniform_int_distribution<int> len(1, 30), grade(0, 5);
    std::vector<int> grades(len(rng));
    int relapse_alerts = 0, heavy_alerts = 0;
    Date day{2024, 1, 1};
    for (auto& g : grades) {
      g = grade(rng);
      auto events = log_entry(h, p, day, rules::kAllGrades[g]);
      day = day.plus_days(1);
      for (const auto& e : events) {
        relapse_alerts += e.kind == NotificationKind::RelapseDetected;
        heavy_alerts += e.kind == NotificationKind::HeavyProteinuria;
      }
    }
    int expected_relapse = 0, expected_heavy = 0;
    for (const auto& run : oracle::heavy_runs(grades)) {
      expected_relapse += run.end - run.begin >= 3;
      expected_heavy += static_cast<int>(run.end - run.begin);
    }
    CHECK(relapse_alerts == expected_relapse);
    CHECK(heavy_alerts == expected_heavy);
  }
}

TEST_CASE("measurement triggers") {
  diary::ClinicalMeasurement m;
  m.id = "m-1";
  m.patient_id = "pat-1";
  m.date = Date{2024, 3, 3};
  m.systolic = 150;
  m.diastolic = 100;
  auto now = Timestamp::parse("2024-03-03T09:00:00Z");
  using rules::GrowthMetric;
  using rules::SeverityColor;

  CHECK(kinds(evaluate_measurement_triggers(m, {rules::BpStage::Stage2, {}}, now)) ==
        std::vector{NotificationKind::BpStage2});
  CHECK(kinds(evaluate_measurement_triggers(m, {rules::BpStage::Stage1, {}}, now)) ==
        std::vector{NotificationKind::BpStage1});
  CHECK(evaluate_measurement_triggers(m, {rules::BpStage::Elevated, {}}, now).empty());

  MeasurementAssessment both{rules::BpStage::Stage2,
                             {{GrowthMetric::Height, {-2.3, SeverityColor::Red}},
                              {GrowthMetric::Weight, {-1.2, SeverityColor::Yellow}}}};
  auto events = evaluate_measurement_triggers(m, both, now);
  CHECK(kinds(events) == std::vector{NotificationKind::BpStage2, NotificationKind::GrowthRed});
  CHECK(events[1].body.find("height (z = -2.30)") != std::string::npos);
  CHECK(events[0].source_id == "m-1");

  MeasurementAssessment green{rules::BpStage::Normal, {{GrowthMetric::Height, {0.4, SeverityColor::Green}}}};
  CHECK(evaluate_measurement_triggers(m, green, now).empty());
  CHECK(evaluate_measurement_triggers(m, {}, now).empty());
}

TEST_CASE("dispatch writes the feed once per key") {
  TempDir dir;
  StoreHarness h(dir.path);
  auto p = linked(*h.store);
  StoreFeed feed(std::shared_ptr<diary::DiaryStore>(h.store.get(), [](auto*) {}));
  auto e = make_event(NotificationKind::HeavyProteinuria, p.patient_id, "entry-1", "body", h.store->now());
  std::vector events{e};

  auto first = dispatch(events, feed, {});
  CHECK(first.feed_appended == std::vector{true});
  auto again = make_event(NotificationKind::HeavyProteinuria, p.patient_id, "entry-1", "body", h.store->now());
  auto second = dispatch(std::vector{again}, feed, {});
  CHECK(second.feed_appended == std::vector{false});
  auto record = h.store->snapshot(p.patient_id);
  REQUIRE(record.notifications.size() == 1);
  CHECK(record.notifications[0].id == e.id);
  CHECK(record.notifications[0].kind == "HeavyProteinuria");
  CHECK(record.notifications[0].message_key == "notification.heavy_proteinuria");
}

TEST_CASE("failing sink is retried with exponential backoff") {
  MemoryFeed feed;
  auto down = std::make_shared<ScriptedSink>("down", -1);
  std::vector<milliseconds> slept;
  auto report = dispatch(std::vector{sample()}, feed, {down}, {}, [&](milliseconds d) { slept.push_back(d); });
  REQUIRE(report.outcomes.size() == 1);
  CHECK(report.outcomes[0].attempts == 3);
  CHECK_FALSE(report.outcomes[0].delivered);
  CHECK(report.outcomes[0].error == "unavailable");
  CHECK(slept == std::vector{milliseconds(1000), milliseconds(2000)});
  CHECK(feed.items.size() == 1);
}

TEST_CASE("recovering sink succeeds within the attempt budget") {
  MemoryFeed feed;
  auto flaky = std::make_shared<ScriptedSink>("flaky", 2);
  auto report = dispatch(std::vector{sample()}, feed, {flaky}, {}, [](milliseconds) {});
  CHECK(report.outcomes[0].attempts == 3);
  CHECK(report.outcomes[0].delivered);
}

TEST_CASE("throwing sink counts as a failed attempt") {
  struct Throwing : NotificationSink {
    std::string name() const override { return "throwing"; }
    DeliveryResult deliver(const NotificationEvent&) override { throw std::runtime_error("boom"); }
  };
  MemoryFeed feed;
  auto report = dispatch(std::vector{sample()}, feed, {std::make_shared<Throwing>()}, {}, [](milliseconds) {});
  CHECK(report.outcomes[0].attempts == 3);
  CHECK(report.outcomes[0].error == "boom");
}

TEST_CASE("report has one outcome per event and sink") {
  MemoryFeed feed;
  SinkList sinks{std::make_shared<ScriptedSink>("a", 0), std::make_shared<ScriptedSink>("b", -1),
                 std::make_shared<ScriptedSink>("c", 0)};
  std::vector events{sample("1"), sample("2")};
  auto report = dispatch(events, feed, sinks, {}, [](milliseconds) {});
  CHECK(report.feed_appended.size() == 2);
  REQUIRE(report.outcomes.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(report.outcomes[i].event_id == events[i / 3].id);
    CHECK(report.outcomes[i].sink == sinks[i % 3]->name());
    CHECK(report.outcomes[i].delivered == (i % 3 != 1));
  }
}

TEST_CASE("log sink appends each key once, across reopen") {
  TempDir dir;
  auto path = dir.path / "notifications.log";
  auto e = sample();
  {
    LogSink sink(path);
    CHECK(sink.deliver(e).ok);
    CHECK(sink.deliver(e).ok);
  }
  LogSink reopened(path);
  CHECK(reopened.deliver(sample()).ok);
  CHECK(reopened.deliver(sample("other")).ok);
  std::ifstream in(path);
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0]["idempotency_key"] == e.idempotency_key);
  CHECK(lines[0]["recipient_role"] == "Both");
  CHECK(lines[0]["kind"] == "HeavyProteinuria");
}

TEST_CASE("webhook sink posts the wire format") {
  httplib::Server server;
  std::mutex mutex;
  std::vector<nlohmann::json> received;
  std::vector<std::string> keys;
  server.Post("/hook", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mutex);
    received.push_back(nlohmann::json::parse(req.body));
    keys.push_back(req.get_header_value("Idempotency-Key"));
    res.status = 204;
  });
  server.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  auto base = "http://127.0.0.1:" + std::to_string(port);

  auto e = sample();
  CHECK(WebhookSink(base + "/hook").deliver(e).ok);
  auto broken = WebhookSink(base + "/broken").deliver(e);
  CHECK_FALSE(broken.ok);
  CHECK(broken.error == "HTTP 500");
  server.stop();
  t.join();
  CHECK_FALSE(WebhookSink(base + "/hook", milliseconds(500)).deliver(e).ok);

  REQUIRE(received.size() == 1);
  const auto& j = received[0];
  CHECK(j["id"] == e.id);
  CHECK(j["kind"] == "HeavyProteinuria");
  CHECK(j["recipient_role"] == "Both");
  CHECK(j["patient_id"] == "pat-1");
  CHECK(j["body"] == "body");
  CHECK(j["created_at"] == "2024-03-02T08:00:00Z");
  CHECK(j["idempotency_key"] == e.idempotency_key);
  CHECK(keys[0] == e.idempotency_key);
}

TEST_CASE("async dispatcher writes the feed before returning") {
  auto feed = std::make_shared<MemoryFeed>();
  auto sink = std::make_shared<ScriptedSink>("ok", 0);
  std::mutex mutex;
  std::vector<SinkOutcome> seen;
  {
    AsyncDispatcher dispatcher(feed, {sink}, {}, 2, [](milliseconds) {}, [&](const SinkOutcome& o) {
      std::lock_guard lock(mutex);
      seen.push_back(o);
    });
    std::vector<NotificationEvent> events;
    for (int i = 0; i < 10; ++i) events.push_back(sample(std::to_string(i)));
    auto appended = dispatcher.submit(events);
    CHECK(appended == std::vector<bool>(10, true));
    CHECK(feed->items.size() == 10);
    dispatcher.flush();
    CHECK(sink->calls == 10);
    CHECK(dispatcher.submit(std::vector{sample("0")}) == std::vector{false});
  }
  CHECK(seen.size() == 11);
  for (const auto& o : seen) CHECK(o.delivered);
}
