#include "utsarjan/diary/blob_store.hpp"

#include "utsarjan/common/crypto.hpp"
#include "utsarjan/diary/errors.hpp"
#include "utsarjan/diary/repository.hpp"

namespace utsarjan::diary {

namespace {

bool valid_ref(std::string_view ref) {
  return ref.size() == 64 && ref.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

}  // namespace

BlobStore::BlobStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path BlobStore::path_for(std::string_view ref) const {
  if (!valid_ref(ref)) throw Error(ErrorCode::Validation, "malformed blob reference");
  return root_ / std::string(ref.substr(0, 2)) / std::string(ref);
}

std::string BlobStore::put(std::string_view content) {
  auto ref = sha256_hex(content);
  auto path = path_for(ref);
  if (!std::filesystem::exists(path)) atomic_write_file(path, content);
  return ref;
}

bool BlobStore::contains(std::string_view ref) const {
  return valid_ref(ref) && std::filesystem::exists(path_for(ref));
}

std::optional<std::string> BlobStore::get(std::string_view ref) const {
  if (!contains(ref)) return std::nullopt;
  return read_file(path_for(ref));
}

}  // namespace utsarjan::diary
