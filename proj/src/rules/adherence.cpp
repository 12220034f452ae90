#include "utsarjan/rules/adherence.hpp"

#include <algorithm>
#include <map>

#include "utsarjan/rules/errors.hpp"

namespace utsarjan::rules {

AdherenceWindow adherence_rate(const DoseSchedule& schedule, std::span<const DoseFact> facts, Date start,
                               Date end) {
  if (start > end) throw InvalidWindow("adherence window start is after its end");
  if (schedule.doses_per_day < 1) throw InvalidWindow("schedule needs at least one dose per day");

  AdherenceWindow out{start, end};
  Date first = std::max(start, schedule.start);
  Date last = schedule.end ? std::min(end, *schedule.end) : end;
  if (first > last) return out;

  int days = last.days_since(first) + 1;
  out.expected_doses = days * schedule.doses_per_day;

  std::map<Date, bool> by_day;
  for (const auto& f : facts) {
    if (f.date >= first && f.date <= last) by_day[f.date] = f.taken;
  }
  int taken_days = static_cast<int>(std::ranges::count_if(by_day, [](const auto& kv) { return kv.second; }));
  out.taken_doses = std::min(out.expected_doses, taken_days * schedule.doses_per_day);
  out.rate = static_cast<double>(out.taken_doses) / out.expected_doses;
  return out;
}

}  // namespace utsarjan::rules
