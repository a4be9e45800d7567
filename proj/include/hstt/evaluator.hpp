#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hstt/instance.hpp"
#include "hstt/schedule.hpp"

namespace hstt {

/// Soft-constraint violation counts and the weighted aggregate. Also used for
/// differences between two states, where components may be negative.
struct CostBreakdown {
  std::int64_t f1 = 0;  // class gaps
  std::int64_t f2 = 0;  // teacher gaps
  std::int64_t f3 = 0;  // compactness
  std::int64_t f4 = 0;  // unbalanced class-days
  std::int64_t f5 = 0;  // unscheduled lessons
  std::int64_t total = 0;

  static CostBreakdown weighted(std::int64_t f1, std::int64_t f2, std::int64_t f3, std::int64_t f4,
                                std::int64_t f5, const Weights& w);
  /// `f1,f2,f3,f4,f5,total`
  std::string csv_row() const;

  CostBreakdown& operator+=(const CostBreakdown& o);
  friend CostBreakdown operator-(const CostBreakdown& a, const CostBreakdown& b);
  bool operator==(const CostBreakdown&) const = default;
};

struct HardViolationReport {
  std::int64_t conflict_count = 0;      // H1 double bookings
  std::int64_t availability_count = 0;  // H2 placements at unavailable periods

  bool clean() const { return conflict_count == 0 && availability_count == 0; }
  bool operator==(const HardViolationReport&) const = default;
};

/// Counts H1/H2 violations from Q alone, without consulting the redundant tables.
HardViolationReport audit_hard(const Instance& inst, std::span<const Placement> assignment);
HardViolationReport audit_hard(const Instance& inst, const ScheduleState& s);

std::int64_t class_gaps(const Instance& inst, const ScheduleState& s);
std::int64_t teacher_gaps(const Instance& inst, const ScheduleState& s);
std::int64_t compactness_violations(const Instance& inst, const ScheduleState& s);
std::int64_t unbalance_violations(const Instance& inst, const ScheduleState& s);
std::int64_t unscheduled_count(const ScheduleState& s);

CostBreakdown total_cost(const Instance& inst, const ScheduleState& s);

/// Exact cost difference total_cost(apply(s, m)) - total_cost(s), evaluated only
/// over the class-days, teacher-days and course siblings that m touches. Scratch
/// buffers make it cheap to call repeatedly; not thread-safe.
class DeltaEvaluator {
 public:
  explicit DeltaEvaluator(const Instance& inst);

  /// Applies m to s, measures, and reverts; s is unchanged on return.
  CostBreakdown delta(ScheduleState& s, const Move& m);

 private:
  struct Contribution {
    std::int64_t f1 = 0, f2 = 0, f3 = 0, f4 = 0;
  };
  void collect(const Move& m);
  Contribution measure(const ScheduleState& s) const;

  const Instance* inst_;
  std::vector<int> class_day_stamp_, teacher_day_stamp_, lesson_stamp_;
  int stamp_ = 0;
  std::vector<int> class_days_, teacher_days_, lessons_;
};

CostBreakdown delta_cost(const Instance& inst, const ScheduleState& s, const Move& m);

// Per-row helpers shared by the full and incremental evaluations.
std::int64_t class_day_gaps(const Instance& inst, const ScheduleState& s, ClassIndex c, int day);
std::int64_t teacher_day_gaps(const Instance& inst, const ScheduleState& s, TeacherIndex t, int day);
bool class_day_unbalanced(const Instance& inst, const ScheduleState& s, ClassIndex c, int day);
bool lesson_not_compact(const Instance& inst, const ScheduleState& s, LessonIndex l);

}  // namespace hstt
