#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>

#include "utsarjan/common/time.hpp"
#include "utsarjan/diary/model.hpp"

namespace utsarjan::notify {

using diary::Recipient;

/// Declaration order is the stable ordering used when one record yields several events.
enum class NotificationKind : std::uint8_t {
  HeavyProteinuria,
  RelapseDetected,
  BpStage1,
  BpStage2,
  GrowthRed,
  DoctorAdvice,
  TestOrdered,
  MedicineUpdated,
};

std::string_view to_string(NotificationKind kind);
std::optional<NotificationKind> parse_kind(std::string_view text);

/// Clinical alerts go to both parties; doctor-initiated messages go to the patient.
Recipient recipient_for(NotificationKind kind);

/// Localisation key for the UI, e.g. "notification.heavy_proteinuria".
std::string message_key(NotificationKind kind);

struct NotificationEvent {
  std::string id;
  std::string idempotency_key;
  std::string patient_id;
  NotificationKind kind = NotificationKind::HeavyProteinuria;
  Recipient recipient = Recipient::Both;
  std::string body;
  std::string source_id;
  Timestamp created_at;
};

/// sha-256 of "patient_id|kind|source_id", lowercase hex.
std::string idempotency_key(std::string_view patient_id, NotificationKind kind, std::string_view source_id);

NotificationEvent make_event(NotificationKind kind, std::string patient_id, std::string source_id, std::string body,
                             Timestamp created_at);

diary::NotificationRecord to_record(const NotificationEvent& event);

/// {id, kind, recipient_role, patient_id, body, created_at, idempotency_key}
nlohmann::json to_wire_json(const NotificationEvent& event);

}  // namespace utsarjan::notify
