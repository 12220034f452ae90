#pragma once

#include <optional>
#include <span>

#include "utsarjan/common/time.hpp"

namespace utsarjan::rules {

struct DoseSchedule {
  Date start;
  std::optional<Date> end;  // open-ended when unset
  int doses_per_day = 1;
};

/// One day's adherence fact for a prescription. A taken day credits all of
/// that day's scheduled doses.
struct DoseFact {
  Date date;
  bool taken = false;
};

struct AdherenceWindow {
  Date start;
  Date end;
  int expected_doses = 0;
  int taken_doses = 0;
  double rate = 1.0;  // 1 by convention when nothing was due
};

/// Adherence over the inclusive window [start, end]. Facts outside the window
/// or the schedule's validity are ignored; for repeated dates the last fact wins.
/// Throws InvalidWindow if start > end.
AdherenceWindow adherence_rate(const DoseSchedule& schedule, std::span<const DoseFact> facts, Date start,
                               Date end);

}  // namespace utsarjan::rules
