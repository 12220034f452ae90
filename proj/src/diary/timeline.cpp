#include "utsarjan/diary/timeline.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "utsarjan/rules/growth.hpp"

namespace utsarjan::diary {

std::string_view TimelineItem::kind() const {
  static constexpr std::string_view kNames[] = {"entry", "measurement", "dose", "advice", "test_order", "notification"};
  return kNames[record.index()];
}

const std::string& TimelineItem::id() const {
  return std::visit([](const auto& r) -> const std::string& { return r.id; }, record);
}

std::vector<TimelineItem> build_timeline(const PatientRecord& r, const DateRange& range) {
  std::vector<TimelineItem> items;
  auto add = [&](Date date, Timestamp created, TimelineRecord rec) {
    if (range.contains(date)) items.push_back({date, created, std::move(rec)});
  };
  for (const auto& e : r.entries) add(e.date, e.created_at, e);
  for (const auto& m : r.measurements) add(m.date, m.created_at, m);
  for (const auto& d : r.doses) add(d.date, d.recorded_at, d);
  for (const auto& a : r.advice) add(a.created_at.date(), a.created_at, a);
  for (const auto& t : r.tests) add(t.created_at.date(), t.created_at, t);
  for (const auto& n : r.notifications) add(n.created_at.date(), n.created_at, n);

  std::sort(items.begin(), items.end(), [](const TimelineItem& a, const TimelineItem& b) {
    if (a.date != b.date) return a.date < b.date;
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    if (a.record.index() != b.record.index()) return a.record.index() < b.record.index();
    return a.id() < b.id();
  });
  return items;
}

namespace {

std::string number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

struct DayRow {
  const DiaryEntry* entry = nullptr;
  // Latest value of each vital recorded that day.
  std::optional<int> systolic, diastolic;
  std::optional<double> height, weight;
  std::set<std::string> taken;
  std::vector<std::string> notes;
};

}  // namespace

csv::Document export_document(const PatientRecord& r) {
  csv::Document doc{kExportHeader, {}};
  auto items = build_timeline(r);

  std::map<Date, DayRow> days;
  for (const auto& item : items) {
    if (std::holds_alternative<NotificationRecord>(item.record)) continue;
    auto& day = days[item.date];
    std::visit(
        [&](const auto& rec) {
          using T = std::decay_t<decltype(rec)>;
          if constexpr (std::is_same_v<T, DiaryEntry>) {
            day.entry = &rec;
          } else if constexpr (std::is_same_v<T, ClinicalMeasurement>) {
            // Items arrive in created_at order, so later values overwrite earlier ones.
            if (rec.systolic && rec.diastolic) {
              day.systolic = rec.systolic;
              day.diastolic = rec.diastolic;
            }
            if (rec.height_cm) day.height = rec.height_cm;
            if (rec.weight_kg) day.weight = rec.weight_kg;
            if (!rec.comments.empty()) day.notes.push_back(rec.comments);
          } else if constexpr (std::is_same_v<T, DoseEvent>) {
            if (rec.taken) {
              if (const auto* p = r.find_prescription(rec.prescription_id)) day.taken.insert(p->label());
            }
          } else if constexpr (std::is_same_v<T, AdviceMessage>) {
            day.notes.push_back((rec.author_role == Role::Doctor ? "Advice: " : "Patient note: ") + rec.text);
          } else if constexpr (std::is_same_v<T, TestOrder>) {
            std::string note = "Tests: " + join(rec.tests, ", ");
            if (!rec.comments.empty()) note += " (" + rec.comments + ")";
            day.notes.push_back(note);
          }
        },
        item.record);
  }

  for (const auto& [date, day] : days) {
    std::set<std::string> due;
    for (const auto& p : r.prescriptions) {
      if (p.active_on(date)) due.insert(p.label());
    }
    std::string bmi;
    if (day.height && day.weight) bmi = rules::format_display(rules::compute_bmi(*day.weight, *day.height));

    doc.rows.push_back({date.to_string(),
                        day.entry ? std::string(rules::to_string(day.entry->grade)) : "",
                        day.entry ? day.entry->symptoms : "",
                        day.systolic ? std::to_string(*day.systolic) : "",
                        day.diastolic ? std::to_string(*day.diastolic) : "",
                        day.height ? number(*day.height) : "",
                        day.weight ? number(*day.weight) : "",
                        bmi,
                        join({day.taken.begin(), day.taken.end()}, "; "),
                        join({due.begin(), due.end()}, "; "),
                        join(day.notes, " | ")});
  }
  return doc;
}

std::string export_csv(const PatientRecord& record) { return csv::write(export_document(record)); }

}  // namespace utsarjan::diary
