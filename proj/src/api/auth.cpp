#include "utsarjan/api/auth.hpp"

#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <json.hpp>

#include "utsarjan/common/crypto.hpp"
#include "utsarjan/diary/repository.hpp"

namespace utsarjan::api {

std::string normalize_email(std::string_view email) {
  auto begin = email.find_first_not_of(" \t\r\n");
  auto end = email.find_last_not_of(" \t\r\n");
  if (begin == std::string_view::npos) throw std::invalid_argument("email is required");
  std::string out(email.substr(begin, end - begin + 1));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  auto at = out.find('@');
  if (at == std::string::npos || at == 0 || at + 1 == out.size() || out.find('@', at + 1) != std::string::npos ||
      out.find_first_of(" \t<>\r\n") != std::string::npos) {
    throw std::invalid_argument("email is not valid");
  }
  return out;
}

PasswordHasher::PasswordHasher(std::uint64_t opslimit, std::size_t memlimit_bytes)
    : opslimit_(opslimit), memlimit_(memlimit_bytes) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  if (opslimit_ < crypto_pwhash_OPSLIMIT_MIN || memlimit_ < crypto_pwhash_MEMLIMIT_MIN) {
    throw std::invalid_argument("password hash cost below the argon2id minimum");
  }
}

std::string PasswordHasher::hash(std::string_view password) const {
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str_alg(out, password.data(), password.size(), opslimit_, memlimit_,
                            crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw std::runtime_error("password hashing ran out of memory");
  }
  return out;
}

bool PasswordHasher::verify(const std::string& encoded, std::string_view password) const {
  return crypto_pwhash_str_verify(encoded.c_str(), password.data(), password.size()) == 0;
}

CredentialStore::CredentialStore(std::optional<std::filesystem::path> file) : file_(std::move(file)) {
  if (!file_ || !std::filesystem::exists(*file_)) return;
  auto doc = nlohmann::json::parse(diary::read_file(*file_));
  for (const auto& j : doc.at("credentials")) {
    Credential c;
    c.principal_id = j.at("principal_id").get<std::string>();
    c.role = diary::parse_role(j.at("role").get<std::string>()).value();
    c.email = j.at("email").get<std::string>();
    c.password_hash = j.at("password_hash").get<std::string>();
    by_email_[{c.role, c.email}] = c;
  }
}

void CredentialStore::persist() const {
  if (!file_) return;
  auto list = nlohmann::json::array();
  for (const auto& [key, c] : by_email_) {
    list.push_back({{"principal_id", c.principal_id},
                    {"role", diary::to_string(c.role)},
                    {"email", c.email},
                    {"password_hash", c.password_hash}});
  }
  diary::atomic_write_file(*file_, nlohmann::json{{"credentials", list}}.dump(1));
}

void CredentialStore::add(const Credential& credential) {
  std::lock_guard lock(mutex_);
  auto key = std::pair{credential.role, credential.email};
  if (by_email_.contains(key)) throw DuplicateEmail();
  by_email_[key] = credential;
  try {
    persist();
  } catch (...) {
    by_email_.erase(key);
    throw;
  }
}

std::optional<Credential> CredentialStore::find(Role role, const std::string& email) const {
  std::lock_guard lock(mutex_);
  auto it = by_email_.find({role, email});
  if (it == by_email_.end()) return std::nullopt;
  return it->second;
}

std::vector<Credential> CredentialStore::find_any(const std::string& email) const {
  std::lock_guard lock(mutex_);
  std::vector<Credential> out;
  for (auto role : {Role::Patient, Role::Doctor}) {
    if (auto it = by_email_.find({role, email}); it != by_email_.end()) out.push_back(it->second);
  }
  return out;
}

bool CredentialStore::contains(Role role, const std::string& email) const { return find(role, email).has_value(); }

Session SessionManager::issue(const Principal& principal) {
  Session s{random_token(32), principal, clock_().plus(ttl_)};
  std::lock_guard lock(mutex_);
  auto now = clock_();
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.expires_at <= now; });
  sessions_[sha256_hex(s.token)] = {principal, s.expires_at};
  return s;
}

std::optional<Principal> SessionManager::resolve(const std::string& token) {
  if (token.empty()) return std::nullopt;
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(sha256_hex(token));
  if (it == sessions_.end()) return std::nullopt;
  if (it->second.expires_at <= clock_()) {
    sessions_.erase(it);
    return std::nullopt;
  }
  return it->second.principal;
}

void OtpService::request(const std::string& email, const std::optional<Principal>& principal) {
  std::string code;
  {
    std::lock_guard lock(mutex_);
    auto now = clock_();
    auto& log = requests_[email];
    while (!log.empty() && log.front().plus(std::chrono::hours(1)) <= now) log.pop_front();
    if (static_cast<int>(log.size()) >= policy_.max_requests_per_hour) throw RateLimited();
    log.push_back(now);
    if (!principal) return;
    char buf[8];
    std::snprintf(buf, sizeof buf, "%06u", static_cast<unsigned>(random_below(1000000)));
    code = buf;
    challenges_[email] = {sha256_hex(code), *principal, now.plus(policy_.lifetime), 0, false};
  }
  mailer_->send({email, "Your Utsarjan sign-in code",
                 "Your sign-in code is " + code + ". It expires in " +
                     std::to_string(policy_.lifetime.count() / 60) + " minutes and can be used once."});
}

std::optional<Principal> OtpService::verify(const std::string& email, std::string_view code) {
  std::lock_guard lock(mutex_);
  auto it = challenges_.find(email);
  if (it == challenges_.end()) return std::nullopt;
  auto& c = it->second;
  if (c.consumed || c.expires_at <= clock_() || c.wrong_attempts >= policy_.max_wrong_attempts) return std::nullopt;
  if (!constant_time_equal(sha256_hex(code), c.code_digest)) {
    ++c.wrong_attempts;
    return std::nullopt;
  }
  c.consumed = true;
  return c.principal;
}

}  // namespace utsarjan::api
