#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace utsarjan::diary {

enum class ErrorCode {
  UnknownPatient,
  UnknownDoctor,
  UnknownRecord,
  FutureDate,
  NotLinked,
  Forbidden,
  Validation,
  Storage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace utsarjan::diary
