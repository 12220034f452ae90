#include "utsarjan/rules/urine.hpp"

#include "utsarjan/rules/errors.hpp"

namespace utsarjan::rules {

SeverityColor classify_urine_protein(UrineProteinGrade grade) {
  switch (grade) {
    case UrineProteinGrade::Negative:
    case UrineProteinGrade::Trace:
      return SeverityColor::Green;
    case UrineProteinGrade::OnePlus:
    case UrineProteinGrade::TwoPlus:
      return SeverityColor::Yellow;
    case UrineProteinGrade::ThreePlus:
    case UrineProteinGrade::FourPlus:
      return SeverityColor::Red;
  }
  return SeverityColor::Red;
}

std::string_view to_string(RelapseStatus status) {
  switch (status) {
    case RelapseStatus::NoRelapse: return "NoRelapse";
    case RelapseStatus::Suspected: return "Suspected";
    case RelapseStatus::Relapse: return "Relapse";
  }
  return "?";
}

RelapseFlag RelapseScanner::extend(const DatedGrade& entry) {
  if (last_date_ && entry.date <= *last_date_) {
    throw UnsortedInput("relapse scan input must be strictly ascending by date (" +
                        entry.date.to_string() + " after " + last_date_->to_string() + ")");
  }
  last_date_ = entry.date;

  RelapseFlag flag{is_heavy(entry.grade)};
  if (flag.heavy) {
    if (state_.suspect_count == 0) run_start_ = entry.date;
    ++state_.suspect_count;
  } else {
    state_.suspect_count = 0;
    run_start_.reset();
  }

  if (state_.suspect_count >= 3) {
    state_.status = RelapseStatus::Relapse;
    state_.onset_date = run_start_;
  } else {
    state_.status = state_.suspect_count > 0 ? RelapseStatus::Suspected : RelapseStatus::NoRelapse;
    state_.onset_date.reset();
  }
  return flag;
}

RelapseScan relapse_scan(std::span<const DatedGrade> entries) {
  RelapseScanner scanner;
  RelapseScan out;
  out.flags.reserve(entries.size());
  for (const auto& e : entries) out.flags.push_back(scanner.extend(e));
  out.state = scanner.state();
  return out;
}

}  // namespace utsarjan::rules
