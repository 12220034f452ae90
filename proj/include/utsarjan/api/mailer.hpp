#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace utsarjan::api {

struct MailMessage {
  std::string to;
  std::string subject;
  std::string body;
};

class Mailer {
 public:
  virtual ~Mailer() = default;
  /// Throws std::runtime_error when the message cannot be handed off.
  virtual void send(const MailMessage& message) = 0;
};

/// Keeps every message in memory.
class CapturingMailer : public Mailer {
 public:
  void send(const MailMessage& message) override;
  std::vector<MailMessage> messages() const;
  std::optional<MailMessage> last_to(const std::string& address) const;

 private:
  mutable std::mutex mutex_;
  std::vector<MailMessage> messages_;
};

/// Drops messages; used when no SMTP server is configured.
class NullMailer : public Mailer {
 public:
  void send(const MailMessage&) override {}
};

struct SmtpSettings {
  std::string url;  // smtp://host:587 or smtps://host:465
  std::string from;
  std::string username;
  std::string password;
  bool require_tls = true;
};

class SmtpMailer : public Mailer {
 public:
  explicit SmtpMailer(SmtpSettings settings) : settings_(std::move(settings)) {}
  void send(const MailMessage& message) override;

 private:
  SmtpSettings settings_;
};

}  // namespace utsarjan::api
