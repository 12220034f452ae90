#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "utsarjan/common/csv.hpp"
#include "utsarjan/diary/model.hpp"

namespace utsarjan::diary {

using TimelineRecord =
    std::variant<DiaryEntry, ClinicalMeasurement, DoseEvent, AdviceMessage, TestOrder, NotificationRecord>;

struct TimelineItem {
  Date date;
  Timestamp created_at;
  TimelineRecord record;

  std::string_view kind() const;
  const std::string& id() const;
};

/// Inclusive date bounds; either side may be open.
struct DateRange {
  std::optional<Date> from;
  std::optional<Date> to;

  bool contains(Date d) const { return (!from || d >= *from) && (!to || d <= *to); }
};

/// Every timeline record of the patient within `range`, ordered by
/// (date, created_at) with kind and id as tie-breakers.
std::vector<TimelineItem> build_timeline(const PatientRecord& record, const DateRange& range = {});

inline const csv::Row kExportHeader{"date",      "urine_protein", "symptoms",        "systolic",
                                    "diastolic", "height_cm",     "weight_kg",       "bmi",
                                    "medicines_taken", "medicines_due", "notes"};

/// One row per day that has at least one diary record; the notification feed is not exported.
csv::Document export_document(const PatientRecord& record);

/// UTF-8, CRLF-terminated RFC 4180 text; byte-identical for identical state.
std::string export_csv(const PatientRecord& record);

}  // namespace utsarjan::diary
