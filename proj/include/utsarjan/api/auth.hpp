#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "utsarjan/api/mailer.hpp"
#include "utsarjan/common/time.hpp"
#include "utsarjan/diary/model.hpp"

namespace utsarjan::api {

using diary::Role;

struct Principal {
  Role role = Role::Patient;
  std::string id;

  friend bool operator==(const Principal&, const Principal&) = default;
};

/// Trimmed, lowercased address. Throws std::invalid_argument if it is not of the form a@b.
std::string normalize_email(std::string_view email);

/// argon2id via libsodium. `opslimit` is the cost factor.
class PasswordHasher {
 public:
  PasswordHasher(std::uint64_t opslimit, std::size_t memlimit_bytes);
  std::string hash(std::string_view password) const;
  bool verify(const std::string& encoded, std::string_view password) const;

 private:
  std::uint64_t opslimit_;
  std::size_t memlimit_;
};

struct Credential {
  std::string principal_id;
  Role role = Role::Patient;
  std::string email;  // normalized
  std::string password_hash;
};

class DuplicateEmail : public std::runtime_error {
 public:
  DuplicateEmail() : std::runtime_error("email already registered for this role") {}
};

/// Credentials keyed by (role, email). Persisted as one JSON file when a path is given.
class CredentialStore {
 public:
  explicit CredentialStore(std::optional<std::filesystem::path> file = std::nullopt);

  /// Throws DuplicateEmail.
  void add(const Credential& credential);
  std::optional<Credential> find(Role role, const std::string& email) const;
  std::vector<Credential> find_any(const std::string& email) const;
  bool contains(Role role, const std::string& email) const;

 private:
  void persist() const;

  std::optional<std::filesystem::path> file_;
  mutable std::mutex mutex_;
  std::map<std::pair<Role, std::string>, Credential> by_email_;
};

struct Session {
  std::string token;
  Principal principal;
  Timestamp expires_at;
};

/// Opaque bearer tokens (256 random bits). Only token digests are kept.
class SessionManager {
 public:
  SessionManager(Clock clock, std::chrono::seconds ttl) : clock_(std::move(clock)), ttl_(ttl) {}

  Session issue(const Principal& principal);
  /// Empty for unknown or expired tokens.
  std::optional<Principal> resolve(const std::string& token);

 private:
  struct Entry {
    Principal principal;
    Timestamp expires_at;
  };
  Clock clock_;
  std::chrono::seconds ttl_;
  std::mutex mutex_;
  std::map<std::string, Entry> sessions_;
};

class RateLimited : public std::runtime_error {
 public:
  RateLimited() : std::runtime_error("too many code requests, try again later") {}
};

struct OtpPolicy {
  std::chrono::seconds lifetime{std::chrono::minutes(10)};
  int max_requests_per_hour = 5;
  int max_wrong_attempts = 5;
};

/// Six-digit single-use codes sent by email.
class OtpService {
 public:
  OtpService(Clock clock, std::shared_ptr<Mailer> mailer, OtpPolicy policy = {})
      : clock_(std::move(clock)), mailer_(std::move(mailer)), policy_(policy) {}

  /// Counts against the per-email hourly limit even when `principal` is empty
  /// (unregistered address); no mail is sent in that case. Throws RateLimited.
  void request(const std::string& email, const std::optional<Principal>& principal);
  /// The latest unexpired, unconsumed challenge for `email` must match.
  std::optional<Principal> verify(const std::string& email, std::string_view code);

 private:
  struct Challenge {
    std::string code_digest;
    Principal principal;
    Timestamp expires_at;
    int wrong_attempts = 0;
    bool consumed = false;
  };
  Clock clock_;
  std::shared_ptr<Mailer> mailer_;
  OtpPolicy policy_;
  std::mutex mutex_;
  std::map<std::string, std::deque<Timestamp>> requests_;
  std::map<std::string, Challenge> challenges_;
};

}  // namespace utsarjan::api
