#pragma once

#include <optional>
#include <span>
#include <vector>

#include "utsarjan/common/time.hpp"
#include "utsarjan/rules/types.hpp"

namespace utsarjan::rules {

/// Negative/Trace -> Green, 1+/2+ -> Yellow, 3+/4+ -> Red.
SeverityColor classify_urine_protein(UrineProteinGrade grade);

/// A reading heavy enough to count toward a relapse run (3+ or 4+).
constexpr bool is_heavy(UrineProteinGrade grade) { return grade >= UrineProteinGrade::ThreePlus; }

enum class RelapseStatus : std::uint8_t { NoRelapse, Suspected, Relapse };

std::string_view to_string(RelapseStatus status);

/// Relapse status derived from the trailing run of heavy readings.
/// Relapse iff suspect_count >= 3; onset_date is the first date of that run.
struct RelapseState {
  RelapseStatus status = RelapseStatus::NoRelapse;
  std::optional<Date> onset_date;
  int suspect_count = 0;

  friend bool operator==(const RelapseState&, const RelapseState&) = default;
};

struct DatedGrade {
  Date date;
  UrineProteinGrade grade;
};

struct RelapseFlag {
  bool heavy = false;
  friend bool operator==(const RelapseFlag&, const RelapseFlag&) = default;
};

struct RelapseScan {
  std::vector<RelapseFlag> flags;
  RelapseState state;
};

/// Incremental form of relapse_scan. Feeding entries one at a time yields
/// exactly the state a full rescan would produce.
class RelapseScanner {
 public:
  RelapseScanner() = default;

  /// Throws UnsortedInput unless `entry.date` is after the last fed date.
  RelapseFlag extend(const DatedGrade& entry);

  const RelapseState& state() const { return state_; }

 private:
  std::optional<Date> last_date_;
  std::optional<Date> run_start_;
  RelapseState state_;
};

/// Entries must be strictly ascending by date (one per calendar day).
RelapseScan relapse_scan(std::span<const DatedGrade> entries);

}  // namespace utsarjan::rules
