#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "utsarjan/common/csv.hpp"
#include "utsarjan/rules/types.hpp"

namespace utsarjan::rules {

struct GrowthRow {
  int age_months = 0;
  double median = 0;
  double sd = 0;
};

/// Median/SD norms per (sex, metric), ages strictly increasing within a series.
///
/// CSV schema (header mandatory, exact): sex,age_months,metric,median,sd
class GrowthReferenceTable {
 public:
  static inline const csv::Row kHeader{"sex", "age_months", "metric", "median", "sd"};

  GrowthReferenceTable() = default;

  /// Throws ReferenceDataError on schema or invariant violations.
  static GrowthReferenceTable from_csv(const csv::Document& doc, std::string version = {});
  static GrowthReferenceTable load(const std::string& path);

  /// Nearest-age row within +/-6 months, ties toward the younger row.
  /// Throws ReferenceMiss when nothing is that close.
  const GrowthRow& lookup(Sex sex, int age_months, GrowthMetric metric) const;

  const std::vector<GrowthRow>& series(Sex sex, GrowthMetric metric) const;
  const std::string& version() const { return version_; }
  bool empty() const { return series_.empty(); }

 private:
  std::map<std::pair<Sex, GrowthMetric>, std::vector<GrowthRow>> series_;
  std::string version_;
};

inline constexpr int kGrowthLookupToleranceMonths = 6;

struct GrowthAssessment {
  double z = 0;
  SeverityColor band = SeverityColor::Green;
};

/// |z| >= 2 -> Red, 1 <= |z| < 2 -> Yellow, otherwise Green.
SeverityColor growth_band(double z);

/// z-score of `value` against the selected reference row.
/// Throws DomainError for value <= 0, ReferenceMiss when no row covers the age.
GrowthAssessment assess_growth(double value, Sex sex, int age_months, GrowthMetric metric,
                               const GrowthReferenceTable& table);

/// weight / (height_m)^2, unrounded. Throws DomainError on non-positive input.
double compute_bmi(double weight_kg, double height_cm);

/// Half-up rounding to one decimal, for display only.
double round_display(double value);
std::string format_display(double value);

}  // namespace utsarjan::rules
