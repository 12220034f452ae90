#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace utsarjan::api {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;

  std::optional<std::string> header(const std::string& lowercase_name) const;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

Response json_response(int status, const nlohmann::json& body);
/// {"error": {"code": ..., "message": ...}}
Response error_response(int status, std::string_view code, std::string_view message);

/// Thrown by handlers; turned into an error envelope by the router.
class HttpError : public std::runtime_error {
 public:
  HttpError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

}  // namespace utsarjan::api
