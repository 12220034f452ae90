#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace utsarjan::diary {

/// Content-addressed files at <root>/<first two hex chars>/<sha256 hex>.
class BlobStore {
 public:
  explicit BlobStore(std::filesystem::path root);

  /// Stores `content` and returns its hash reference. Idempotent.
  std::string put(std::string_view content);
  std::optional<std::string> get(std::string_view ref) const;
  bool contains(std::string_view ref) const;
  std::filesystem::path path_for(std::string_view ref) const;

 private:
  std::filesystem::path root_;
};

}  // namespace utsarjan::diary
