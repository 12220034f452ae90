#include "utsarjan/api/mailer.hpp"

#include <curl/curl.h>

#include <cstring>
#include <memory>
#include <stdexcept>

namespace utsarjan::api {

void CapturingMailer::send(const MailMessage& message) {
  std::lock_guard lock(mutex_);
  messages_.push_back(message);
}

std::vector<MailMessage> CapturingMailer::messages() const {
  std::lock_guard lock(mutex_);
  return messages_;
}

std::optional<MailMessage> CapturingMailer::last_to(const std::string& address) const {
  std::lock_guard lock(mutex_);
  for (auto it = messages_.rbegin(); it != messages_.rend(); ++it) {
    if (it->to == address) return *it;
  }
  return std::nullopt;
}

namespace {

struct Payload {
  std::string data;
  std::size_t offset = 0;
};

size_t read_payload(char* buffer, size_t size, size_t count, void* user) {
  auto* p = static_cast<Payload*>(user);
  std::size_t n = std::min(size * count, p->data.size() - p->offset);
  std::memcpy(buffer, p->data.data() + p->offset, n);
  p->offset += n;
  return n;
}

}  // namespace

void SmtpMailer::send(const MailMessage& message) {
  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
  if (!curl) throw std::runtime_error("curl_easy_init failed");

  Payload payload;
  payload.data = "To: <" + message.to + ">\r\nFrom: <" + settings_.from + ">\r\nSubject: " + message.subject +
                 "\r\nContent-Type: text/plain; charset=utf-8\r\n\r\n" + message.body + "\r\n";

  std::string from = "<" + settings_.from + ">";
  std::string to = "<" + message.to + ">";
  curl_slist* rcpt = curl_slist_append(nullptr, to.c_str());
  std::unique_ptr<curl_slist, decltype(&curl_slist_free_all)> rcpt_guard(rcpt, curl_slist_free_all);

  curl_easy_setopt(curl.get(), CURLOPT_URL, settings_.url.c_str());
  if (settings_.require_tls) curl_easy_setopt(curl.get(), CURLOPT_USE_SSL, static_cast<long>(CURLUSESSL_ALL));
  if (!settings_.username.empty()) {
    curl_easy_setopt(curl.get(), CURLOPT_USERNAME, settings_.username.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_PASSWORD, settings_.password.c_str());
  }
  curl_easy_setopt(curl.get(), CURLOPT_MAIL_FROM, from.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_MAIL_RCPT, rcpt);
  curl_easy_setopt(curl.get(), CURLOPT_READFUNCTION, read_payload);
  curl_easy_setopt(curl.get(), CURLOPT_READDATA, &payload);
  curl_easy_setopt(curl.get(), CURLOPT_UPLOAD, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT, 15L);
  curl_easy_setopt(curl.get(), CURLOPT_NOSIGNAL, 1L);

  CURLcode rc = curl_easy_perform(curl.get());
  if (rc != CURLE_OK) throw std::runtime_error(std::string("smtp: ") + curl_easy_strerror(rc));
}

}  // namespace utsarjan::api
