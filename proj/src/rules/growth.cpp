#include "utsarjan/rules/growth.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "utsarjan/rules/errors.hpp"

namespace utsarjan::rules {

namespace {

double parse_number(const std::string& text, std::size_t line, const char* column) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ReferenceDataError("growth table row " + std::to_string(line) + ": bad " + column + " '" +
                             text + "'");
  }
  return v;
}

int parse_integer(const std::string& text, std::size_t line, const char* column) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ReferenceDataError("growth table row " + std::to_string(line) + ": bad " + column + " '" +
                             text + "'");
  }
  return v;
}

}  // namespace

GrowthReferenceTable GrowthReferenceTable::from_csv(const csv::Document& doc, std::string version) {
  try {
    csv::require_header(doc, kHeader);
  } catch (const csv::ParseError& e) {
    throw ReferenceDataError(std::string("growth table: ") + e.what());
  }
  GrowthReferenceTable table;
  table.version_ = std::move(version);
  std::size_t line = 1;
  for (const auto& row : doc.rows) {
    ++line;
    auto sex = parse_sex(row[0]);
    auto metric = parse_metric(row[2]);
    if (!sex || !metric) {
      throw ReferenceDataError("growth table row " + std::to_string(line) + ": bad sex or metric");
    }
    GrowthRow r{parse_integer(row[1], line, "age_months"), parse_number(row[3], line, "median"),
                parse_number(row[4], line, "sd")};
    if (r.sd <= 0) throw ReferenceDataError("growth table row " + std::to_string(line) + ": sd must be > 0");
    if (r.median <= 0 || r.age_months < 0) {
      throw ReferenceDataError("growth table row " + std::to_string(line) + ": out-of-range value");
    }
    auto& series = table.series_[{*sex, *metric}];
    if (!series.empty() && series.back().age_months >= r.age_months) {
      throw ReferenceDataError("growth table row " + std::to_string(line) +
                               ": ages must be strictly increasing per (sex, metric)");
    }
    series.push_back(r);
  }
  return table;
}

GrowthReferenceTable GrowthReferenceTable::load(const std::string& path) {
  try {
    return from_csv(csv::read_file(path), std::filesystem::path(path).stem().string());
  } catch (const csv::ParseError& e) {
    throw ReferenceDataError(path + ": " + e.what());
  } catch (const ReferenceDataError& e) {
    throw ReferenceDataError(path + ": " + e.what());
  }
}

const std::vector<GrowthRow>& GrowthReferenceTable::series(Sex sex, GrowthMetric metric) const {
  static const std::vector<GrowthRow> kEmpty;
  auto it = series_.find({sex, metric});
  return it == series_.end() ? kEmpty : it->second;
}

const GrowthRow& GrowthReferenceTable::lookup(Sex sex, int age_months, GrowthMetric metric) const {
  const auto& rows = series(sex, metric);
  const GrowthRow* best = nullptr;
  int best_gap = kGrowthLookupToleranceMonths + 1;
  // Ascending ages: on an exact tie the younger row was seen first and is kept.
  for (const auto& row : rows) {
    int gap = std::abs(row.age_months - age_months);
    if (gap < best_gap) {
      best = &row;
      best_gap = gap;
    }
  }
  if (!best) {
    throw ReferenceMiss("no " + std::string(to_string(metric)) + " reference row for sex " +
                        std::string(to_string(sex)) + " within 6 months of age " +
                        std::to_string(age_months) + " months");
  }
  return *best;
}

SeverityColor growth_band(double z) {
  double a = std::abs(z);
  if (a >= 2.0) return SeverityColor::Red;
  if (a >= 1.0) return SeverityColor::Yellow;
  return SeverityColor::Green;
}

GrowthAssessment assess_growth(double value, Sex sex, int age_months, GrowthMetric metric,
                               const GrowthReferenceTable& table) {
  if (!(value > 0)) throw DomainError("growth value must be positive");
  const auto& row = table.lookup(sex, age_months, metric);
  double z = (value - row.median) / row.sd;
  // Drop sub-1e-9 float noise so values built as median + k*sd land on k exactly.
  z = std::round(z * 1e9) / 1e9;
  return {z, growth_band(z)};
}

double compute_bmi(double weight_kg, double height_cm) {
  if (!(weight_kg > 0) || !(height_cm > 0)) {
    throw DomainError("BMI needs positive weight and height");
  }
  double m = height_cm / 100.0;
  return weight_kg / (m * m);
}

double round_display(double value) {
  // Snap away binary noise first so 20.85 rounds like the decimal it represents.
  double snapped = std::round(value * 1e9) / 1e9;
  return std::floor(snapped * 10.0 + 0.5) / 10.0;
}

std::string format_display(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", round_display(value));
  return buf;
}

}  // namespace utsarjan::rules
