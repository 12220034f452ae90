#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "utsarjan/common/csv.hpp"
#include "utsarjan/rules/growth.hpp"
#include "utsarjan/rules/types.hpp"

namespace utsarjan::rules {

struct BpReading {
  int systolic = 0;
  int diastolic = 0;
  int age_months = 0;
  Sex sex = Sex::F;
  double height_cm = 0;
};

/// Throws DomainError unless systolic > diastolic > 0, 0 < age <= 216 months, height > 0.
void validate(const BpReading& reading);

struct BpPercentileRow {
  int height_band = 0;  // height percentile the row applies from, e.g. 5, 10, 25, 50
  int sbp_p90 = 0;
  int sbp_p95 = 0;
  int dbp_p90 = 0;
  int dbp_p95 = 0;
};

struct BpCutoff {
  int systolic = 0;
  int diastolic = 0;
};

/// Fixed cutoffs applied from 13 years of age.
struct StaticBpThresholds {
  BpCutoff elevated{120, 80};
  BpCutoff stage1{130, 80};
  BpCutoff stage2{140, 90};
};

inline constexpr int kAdolescentAgeYears = 13;
inline constexpr int kStage2MarginMmHg = 12;

/// Percentile rows for ages 1-12 years plus the adolescent static cutoffs.
///
/// CSV schema (header mandatory, exact):
///   sex,age_years,height_band,sbp_p90,sbp_p95,dbp_p90,dbp_p95
/// Percentile rows: sex F|M, age_years 1..12, height_band an integer percentile.
/// Static rows: sex `*`, age_years `13+`, height_band one of elevated|stage1|stage2,
/// with the cutoff in sbp_p90/dbp_p90 and the p95 cells left empty.
///
/// The height band is found by converting height to a percentile against the
/// height norms of the growth table, then taking the highest band not above it
/// (the lowest band when the child is below every band).
class BpReferenceTable {
 public:
  static inline const csv::Row kHeader{"sex",     "age_years", "height_band", "sbp_p90",
                                       "sbp_p95", "dbp_p90",   "dbp_p95"};

  BpReferenceTable() = default;

  static BpReferenceTable from_csv(const csv::Document& doc,
                                   std::shared_ptr<const GrowthReferenceTable> height_norms,
                                   std::string version = {});
  static BpReferenceTable load(const std::string& path,
                               std::shared_ptr<const GrowthReferenceTable> height_norms);

  const StaticBpThresholds& adolescent() const { return static_; }

  /// Row for a child under 13. Throws ReferenceMiss if uncovered.
  const BpPercentileRow& lookup(Sex sex, int age_months, double height_cm) const;

  /// Height percentile (0-100) from the growth table's height series.
  double height_percentile(Sex sex, int age_months, double height_cm) const;

  const std::vector<BpPercentileRow>& rows(Sex sex, int age_years) const;
  const std::string& version() const { return version_; }

 private:
  std::map<std::pair<Sex, int>, std::vector<BpPercentileRow>> rows_;
  StaticBpThresholds static_;
  std::shared_ptr<const GrowthReferenceTable> height_norms_;
  std::string version_;
};

/// Stage implied by one channel against its p90/p95 values (under 13) or static cutoffs.
BpStage systolic_stage(int systolic, const BpPercentileRow& row, const StaticBpThresholds& fixed);
BpStage diastolic_stage(int diastolic, const BpPercentileRow& row, const StaticBpThresholds& fixed);
BpStage adolescent_systolic_stage(int systolic, const StaticBpThresholds& fixed);
BpStage adolescent_diastolic_stage(int diastolic, const StaticBpThresholds& fixed);

/// Maximum of the systolic- and diastolic-implied stages.
BpStage classify_bp(const BpReading& reading, const BpReferenceTable& table);

/// Normal/Elevated -> Green, Stage1 -> Yellow, Stage2 -> Red.
SeverityColor bp_color(BpStage stage);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace utsarjan::rules
