#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "hstt/instance.hpp"
#include "hstt/schedule.hpp"

namespace hstt {

/// Sort key of an unscheduled lesson: its feasible start-period count. Lower
/// counts are more constrained and go first; 0 means it cannot be placed now.
int lesson_priority(const Instance& inst, const ScheduleState& s, LessonIndex l);

/// The feasible start period of l that the fewest other unscheduled lessons could
/// also start at; ties go to the lowest period. nullopt when l has no feasible period.
std::optional<Period> select_period(const Instance& inst, const ScheduleState& s, LessonIndex l);

struct ConstructorOptions {
  std::uint64_t seed = 0;
  bool shuffle_ties = false;  // randomize equal-priority order instead of lowest id
  /// Called before every placement with the chosen lesson and period.
  std::function<void(const ScheduleState&, LessonIndex, Period)> on_place;
};

/// Greedy most-constrained-first construction without backtracking. Lessons that
/// run out of feasible periods stay unscheduled.
ScheduleState build_initial(const Instance& inst, const ConstructorOptions& opts = {});

}  // namespace hstt
