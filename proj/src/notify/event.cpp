#include "utsarjan/notify/event.hpp"

#include <array>

#include "utsarjan/common/crypto.hpp"

namespace utsarjan::notify {

namespace {

struct KindInfo {
  NotificationKind kind;
  std::string_view name;
  std::string_view key;
};

constexpr std::array kKinds{
    KindInfo{NotificationKind::HeavyProteinuria, "HeavyProteinuria", "heavy_proteinuria"},
    KindInfo{NotificationKind::RelapseDetected, "RelapseDetected", "relapse_detected"},
    KindInfo{NotificationKind::BpStage1, "BpStage1", "bp_stage1"},
    KindInfo{NotificationKind::BpStage2, "BpStage2", "bp_stage2"},
    KindInfo{NotificationKind::GrowthRed, "GrowthRed", "growth_red"},
    KindInfo{NotificationKind::DoctorAdvice, "DoctorAdvice", "doctor_advice"},
    KindInfo{NotificationKind::TestOrdered, "TestOrdered", "test_ordered"},
    KindInfo{NotificationKind::MedicineUpdated, "MedicineUpdated", "medicine_updated"},
};

}  // namespace

std::string_view to_string(NotificationKind kind) { return kKinds[static_cast<std::size_t>(kind)].name; }

std::optional<NotificationKind> parse_kind(std::string_view text) {
  for (const auto& k : kKinds) {
    if (k.name == text) return k.kind;
  }
  return std::nullopt;
}

std::string message_key(NotificationKind kind) {
  return "notification." + std::string(kKinds[static_cast<std::size_t>(kind)].key);
}

Recipient recipient_for(NotificationKind kind) {
  switch (kind) {
    case NotificationKind::DoctorAdvice:
    case NotificationKind::TestOrdered:
    case NotificationKind::MedicineUpdated:
      return Recipient::Patient;
    default:
      return Recipient::Both;
  }
}

std::string idempotency_key(std::string_view patient_id, NotificationKind kind, std::string_view source_id) {
  std::string material;
  material.append(patient_id).append("|").append(to_string(kind)).append("|").append(source_id);
  return sha256_hex(material);
}

NotificationEvent make_event(NotificationKind kind, std::string patient_id, std::string source_id, std::string body,
                             Timestamp created_at) {
  NotificationEvent e;
  e.id = random_id();
  e.idempotency_key = idempotency_key(patient_id, kind, source_id);
  e.patient_id = std::move(patient_id);
  e.kind = kind;
  e.recipient = recipient_for(kind);
  e.body = std::move(body);
  e.source_id = std::move(source_id);
  e.created_at = created_at;
  return e;
}

diary::NotificationRecord to_record(const NotificationEvent& e) {
  return {e.id,          e.idempotency_key, e.patient_id, std::string(to_string(e.kind)), e.recipient, e.body,
          message_key(e.kind), e.source_id, e.created_at};
}

nlohmann::json to_wire_json(const NotificationEvent& e) {
  return {{"id", e.id},
          {"kind", to_string(e.kind)},
          {"recipient_role", diary::to_string(e.recipient)},
          {"patient_id", e.patient_id},
          {"body", e.body},
          {"created_at", e.created_at.to_string()},
          {"idempotency_key", e.idempotency_key}};
}

}  // namespace utsarjan::notify
