#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>

namespace utsarjan::rules {

/// Urine dipstick protein grade, ordered by severity.
enum class UrineProteinGrade : std::uint8_t { Negative, Trace, OnePlus, TwoPlus, ThreePlus, FourPlus };

inline constexpr std::array kAllGrades{UrineProteinGrade::Negative, UrineProteinGrade::Trace,
                                       UrineProteinGrade::OnePlus,  UrineProteinGrade::TwoPlus,
                                       UrineProteinGrade::ThreePlus, UrineProteinGrade::FourPlus};

/// Nominal concentration for the positive grades (30/100/300/2000 mg/dL).
std::optional<int> nominal_mg_dl(UrineProteinGrade grade);

/// "Negative", "Trace", "1+" .. "4+".
std::string_view to_string(UrineProteinGrade grade);
std::optional<UrineProteinGrade> parse_grade(std::string_view text);

enum class SeverityColor : std::uint8_t { Green, Yellow, Red };

std::string_view to_string(SeverityColor color);

enum class Sex : std::uint8_t { F, M };

std::string_view to_string(Sex sex);
std::optional<Sex> parse_sex(std::string_view text);

enum class BpStage : std::uint8_t { Normal, Elevated, Stage1, Stage2 };

inline constexpr std::array kAllBpStages{BpStage::Normal, BpStage::Elevated, BpStage::Stage1,
                                         BpStage::Stage2};

std::string_view to_string(BpStage stage);

enum class GrowthMetric : std::uint8_t { Height, Weight, Bmi };

std::string_view to_string(GrowthMetric metric);
std::optional<GrowthMetric> parse_metric(std::string_view text);

/// Enum ordering helpers; the enums above are declared in severity order.
template <typename E>
constexpr auto rank(E e) {
  return static_cast<std::underlying_type_t<E>>(e);
}

template <typename E>
constexpr E max_of(E a, E b) {
  return rank(a) < rank(b) ? b : a;
}

}  // namespace utsarjan::rules
