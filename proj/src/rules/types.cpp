#include "utsarjan/rules/types.hpp"

namespace utsarjan::rules {

std::optional<int> nominal_mg_dl(UrineProteinGrade grade) {
  switch (grade) {
    case UrineProteinGrade::OnePlus: return 30;
    case UrineProteinGrade::TwoPlus: return 100;
    case UrineProteinGrade::ThreePlus: return 300;
    case UrineProteinGrade::FourPlus: return 2000;
    default: return std::nullopt;
  }
}

std::string_view to_string(UrineProteinGrade grade) {
  switch (grade) {
    case UrineProteinGrade::Negative: return "Negative";
    case UrineProteinGrade::Trace: return "Trace";
    case UrineProteinGrade::OnePlus: return "1+";
    case UrineProteinGrade::TwoPlus: return "2+";
    case UrineProteinGrade::ThreePlus: return "3+";
    case UrineProteinGrade::FourPlus: return "4+";
  }
  return "?";
}

std::optional<UrineProteinGrade> parse_grade(std::string_view text) {
  for (auto g : kAllGrades) {
    if (to_string(g) == text) return g;
  }
  if (text == "negative" || text == "nil") return UrineProteinGrade::Negative;
  if (text == "trace") return UrineProteinGrade::Trace;
  return std::nullopt;
}

std::string_view to_string(SeverityColor color) {
  switch (color) {
    case SeverityColor::Green: return "green";
    case SeverityColor::Yellow: return "yellow";
    case SeverityColor::Red: return "red";
  }
  return "?";
}

std::string_view to_string(Sex sex) { return sex == Sex::F ? "F" : "M"; }

std::optional<Sex> parse_sex(std::string_view text) {
  if (text == "F" || text == "f") return Sex::F;
  if (text == "M" || text == "m") return Sex::M;
  return std::nullopt;
}

std::string_view to_string(BpStage stage) {
  switch (stage) {
    case BpStage::Normal: return "Normal";
    case BpStage::Elevated: return "Elevated";
    case BpStage::Stage1: return "Stage1";
    case BpStage::Stage2: return "Stage2";
  }
  return "?";
}

std::string_view to_string(GrowthMetric metric) {
  switch (metric) {
    case GrowthMetric::Height: return "height";
    case GrowthMetric::Weight: return "weight";
    case GrowthMetric::Bmi: return "bmi";
  }
  return "?";
}

std::optional<GrowthMetric> parse_metric(std::string_view text) {
  if (text == "height") return GrowthMetric::Height;
  if (text == "weight") return GrowthMetric::Weight;
  if (text == "bmi") return GrowthMetric::Bmi;
  return std::nullopt;
}

}  // namespace utsarjan::rules
