#include "utsarjan/rules/blood_pressure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>

#include "utsarjan/rules/errors.hpp"

namespace utsarjan::rules {

namespace {

int parse_mmhg(const std::string& text, std::size_t line, const char* column) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || v <= 0) {
    throw ReferenceDataError("bp table row " + std::to_string(line) + ": bad " + column + " '" + text +
                             "'");
  }
  return v;
}

BpStage stage_from_percentiles(int value, int p90, int p95, int static_stage2) {
  if (value >= p95 + kStage2MarginMmHg || value >= static_stage2) return BpStage::Stage2;
  if (value >= p95) return BpStage::Stage1;
  if (value >= p90) return BpStage::Elevated;
  return BpStage::Normal;
}

}  // namespace

void validate(const BpReading& r) {
  if (!(r.systolic > r.diastolic && r.diastolic > 0)) {
    throw DomainError("blood pressure requires systolic > diastolic > 0");
  }
  if (r.age_months <= 0 || r.age_months > 216) throw DomainError("age must be in (0, 216] months");
  if (!(r.height_cm > 0)) throw DomainError("height must be positive");
}

BpReferenceTable BpReferenceTable::from_csv(const csv::Document& doc,
                                            std::shared_ptr<const GrowthReferenceTable> height_norms,
                                            std::string version) {
  try {
    csv::require_header(doc, kHeader);
  } catch (const csv::ParseError& e) {
    throw ReferenceDataError(std::string("bp table: ") + e.what());
  }
  BpReferenceTable table;
  table.height_norms_ = std::move(height_norms);
  table.version_ = std::move(version);

  bool seen_elevated = false, seen_stage1 = false, seen_stage2 = false;
  std::size_t line = 1;
  for (const auto& row : doc.rows) {
    ++line;
    if (row[0] == "*" && row[1] == "13+") {
      if (!row[4].empty() || !row[6].empty()) {
        throw ReferenceDataError("bp table row " + std::to_string(line) +
                                 ": static rows leave the p95 cells empty");
      }
      BpCutoff cut{parse_mmhg(row[3], line, "sbp_p90"), parse_mmhg(row[5], line, "dbp_p90")};
      if (row[2] == "elevated") {
        table.static_.elevated = cut;
        seen_elevated = true;
      } else if (row[2] == "stage1") {
        table.static_.stage1 = cut;
        seen_stage1 = true;
      } else if (row[2] == "stage2") {
        table.static_.stage2 = cut;
        seen_stage2 = true;
      } else {
        throw ReferenceDataError("bp table row " + std::to_string(line) + ": unknown static row '" +
                                 row[2] + "'");
      }
      continue;
    }
    auto sex = parse_sex(row[0]);
    if (!sex) throw ReferenceDataError("bp table row " + std::to_string(line) + ": bad sex");
    int age = parse_mmhg(row[1], line, "age_years");
    if (age < 1 || age >= kAdolescentAgeYears) {
      throw ReferenceDataError("bp table row " + std::to_string(line) + ": percentile rows cover ages 1-12");
    }
    BpPercentileRow r{parse_mmhg(row[2], line, "height_band"), parse_mmhg(row[3], line, "sbp_p90"),
                      parse_mmhg(row[4], line, "sbp_p95"), parse_mmhg(row[5], line, "dbp_p90"),
                      parse_mmhg(row[6], line, "dbp_p95")};
    if (r.height_band >= 100) {
      throw ReferenceDataError("bp table row " + std::to_string(line) + ": height_band must be < 100");
    }
    if (!(r.sbp_p90 < r.sbp_p95) || !(r.dbp_p90 < r.dbp_p95)) {
      throw ReferenceDataError("bp table row " + std::to_string(line) + ": p90 must be below p95");
    }
    auto& bands = table.rows_[{*sex, age}];
    if (std::any_of(bands.begin(), bands.end(),
                    [&](const BpPercentileRow& b) { return b.height_band == r.height_band; })) {
      throw ReferenceDataError("bp table row " + std::to_string(line) + ": duplicate height band");
    }
    bands.push_back(r);
    std::sort(bands.begin(), bands.end(),
              [](const auto& a, const auto& b) { return a.height_band < b.height_band; });
  }
  if (!seen_elevated || !seen_stage1 || !seen_stage2) {
    throw ReferenceDataError("bp table: missing 13+ static rows (elevated, stage1, stage2)");
  }
  for (Sex sex : {Sex::F, Sex::M}) {
    for (int age = 1; age < kAdolescentAgeYears; ++age) {
      if (!table.rows_.contains({sex, age})) {
        throw ReferenceDataError("bp table: no rows for sex " + std::string(to_string(sex)) + " age " +
                                 std::to_string(age));
      }
    }
  }
  return table;
}

BpReferenceTable BpReferenceTable::load(const std::string& path,
                                        std::shared_ptr<const GrowthReferenceTable> height_norms) {
  try {
    return from_csv(csv::read_file(path), std::move(height_norms),
                    std::filesystem::path(path).stem().string());
  } catch (const csv::ParseError& e) {
    throw ReferenceDataError(path + ": " + e.what());
  } catch (const ReferenceDataError& e) {
    throw ReferenceDataError(path + ": " + e.what());
  }
}

const std::vector<BpPercentileRow>& BpReferenceTable::rows(Sex sex, int age_years) const {
  static const std::vector<BpPercentileRow> kEmpty;
  auto it = rows_.find({sex, age_years});
  return it == rows_.end() ? kEmpty : it->second;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double BpReferenceTable::height_percentile(Sex sex, int age_months, double height_cm) const {
  if (!height_norms_) throw ReferenceMiss("bp table has no height norms attached");
  auto g = assess_growth(height_cm, sex, age_months, GrowthMetric::Height, *height_norms_);
  return 100.0 * normal_cdf(g.z);
}

const BpPercentileRow& BpReferenceTable::lookup(Sex sex, int age_months, double height_cm) const {
  const auto& bands = rows(sex, age_months / 12);
  if (bands.empty()) {
    throw ReferenceMiss("no bp reference rows for sex " + std::string(to_string(sex)) + " age " +
                        std::to_string(age_months / 12) + " years");
  }
  double pct = height_percentile(sex, age_months, height_cm);
  const BpPercentileRow* chosen = &bands.front();
  for (const auto& b : bands) {
    if (b.height_band <= pct) chosen = &b;
  }
  return *chosen;
}

BpStage systolic_stage(int systolic, const BpPercentileRow& row, const StaticBpThresholds& fixed) {
  return stage_from_percentiles(systolic, row.sbp_p90, row.sbp_p95, fixed.stage2.systolic);
}

BpStage diastolic_stage(int diastolic, const BpPercentileRow& row, const StaticBpThresholds& fixed) {
  return stage_from_percentiles(diastolic, row.dbp_p90, row.dbp_p95, fixed.stage2.diastolic);
}

BpStage adolescent_systolic_stage(int systolic, const StaticBpThresholds& fixed) {
  if (systolic >= fixed.stage2.systolic) return BpStage::Stage2;
  if (systolic >= fixed.stage1.systolic) return BpStage::Stage1;
  if (systolic >= fixed.elevated.systolic) return BpStage::Elevated;
  return BpStage::Normal;
}

BpStage adolescent_diastolic_stage(int diastolic, const StaticBpThresholds& fixed) {
  if (diastolic >= fixed.stage2.diastolic) return BpStage::Stage2;
  if (diastolic >= fixed.stage1.diastolic) return BpStage::Stage1;
  if (diastolic >= fixed.elevated.diastolic) return BpStage::Elevated;
  return BpStage::Normal;
}

BpStage classify_bp(const BpReading& reading, const BpReferenceTable& table) {
  validate(reading);
  const auto& fixed = table.adolescent();
  if (reading.age_months / 12 >= kAdolescentAgeYears) {
    return max_of(adolescent_systolic_stage(reading.systolic, fixed),
                  adolescent_diastolic_stage(reading.diastolic, fixed));
  }
  const auto& row = table.lookup(reading.sex, reading.age_months, reading.height_cm);
  return max_of(systolic_stage(reading.systolic, row, fixed), diastolic_stage(reading.diastolic, row, fixed));
}

SeverityColor bp_color(BpStage stage) {
  switch (stage) {
    case BpStage::Normal:
    case BpStage::Elevated:
      return SeverityColor::Green;
    case BpStage::Stage1:
      return SeverityColor::Yellow;
    case BpStage::Stage2:
      return SeverityColor::Red;
  }
  return SeverityColor::Red;
}

}  // namespace utsarjan::rules
