#include "utsarjan/diary/repository.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "utsarjan/common/crypto.hpp"
#include "utsarjan/diary/errors.hpp"
#include "utsarjan/diary/json_codec.hpp"

namespace utsarjan::diary {

namespace fs = std::filesystem;

void atomic_write_file(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + random_token(6);
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) throw Error(ErrorCode::Storage, "cannot create " + tmp.string());
  std::size_t done = 0;
  while (done < content.size()) {
    ssize_t n = ::write(fd, content.data() + done, content.size() - done);
    if (n < 0) {
      ::close(fd);
      fs::remove(tmp);
      throw Error(ErrorCode::Storage, "write failed for " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    fs::remove(tmp);
    throw Error(ErrorCode::Storage, "fsync failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Storage, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

template <typename T>
std::vector<T> load_dir(const fs::path& dir) {
  std::vector<T> out;
  if (!fs::exists(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      out.push_back(nlohmann::json::parse(read_file(f)).get<T>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Storage, "corrupt record " + f.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

FileRepository::FileRepository(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "patients");
  fs::create_directories(root_ / "doctors");
}

std::vector<PatientRecord> FileRepository::load_patients() { return load_dir<PatientRecord>(root_ / "patients"); }

std::vector<DoctorProfile> FileRepository::load_doctors() { return load_dir<DoctorProfile>(root_ / "doctors"); }

void FileRepository::save_patient(const PatientRecord& record) {
  atomic_write_file(root_ / "patients" / (record.profile.id + ".json"), nlohmann::json(record).dump(1));
}

void FileRepository::save_doctor(const DoctorProfile& doctor) {
  atomic_write_file(root_ / "doctors" / (doctor.id + ".json"), nlohmann::json(doctor).dump(1));
}

std::vector<PatientRecord> MemoryRepository::load_patients() {
  std::lock_guard lock(mutex_);
  std::vector<PatientRecord> out;
  for (const auto& [id, r] : patients_) out.push_back(r);
  return out;
}

std::vector<DoctorProfile> MemoryRepository::load_doctors() {
  std::lock_guard lock(mutex_);
  std::vector<DoctorProfile> out;
  for (const auto& [id, d] : doctors_) out.push_back(d);
  return out;
}

void MemoryRepository::save_patient(const PatientRecord& record) {
  std::lock_guard lock(mutex_);
  patients_[record.profile.id] = record;
}

void MemoryRepository::save_doctor(const DoctorProfile& doctor) {
  std::lock_guard lock(mutex_);
  doctors_[doctor.id] = doctor;
}

}  // namespace utsarjan::diary
