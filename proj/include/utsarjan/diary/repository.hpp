#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "utsarjan/diary/model.hpp"

namespace utsarjan::diary {

/// Persistence backend for aggregates. Each save replaces one aggregate
/// atomically; there are no cross-aggregate transactions.
class Repository {
 public:
  virtual ~Repository() = default;

  virtual std::vector<PatientRecord> load_patients() = 0;
  virtual std::vector<DoctorProfile> load_doctors() = 0;
  virtual void save_patient(const PatientRecord& record) = 0;
  virtual void save_doctor(const DoctorProfile& doctor) = 0;
};

/// JSON documents under <root>/patients/<id>.json and <root>/doctors/<id>.json.
/// Writes go to a temporary file that is fsynced and renamed into place.
class FileRepository final : public Repository {
 public:
  explicit FileRepository(std::filesystem::path root);

  std::vector<PatientRecord> load_patients() override;
  std::vector<DoctorProfile> load_doctors() override;
  void save_patient(const PatientRecord& record) override;
  void save_doctor(const DoctorProfile& doctor) override;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

class MemoryRepository final : public Repository {
 public:
  std::vector<PatientRecord> load_patients() override;
  std::vector<DoctorProfile> load_doctors() override;
  void save_patient(const PatientRecord& record) override;
  void save_doctor(const DoctorProfile& doctor) override;

 private:
  std::mutex mutex_;
  std::map<std::string, PatientRecord> patients_;
  std::map<std::string, DoctorProfile> doctors_;
};

/// Replace `path` with `content` via write-to-temp, fsync, rename.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace utsarjan::diary
