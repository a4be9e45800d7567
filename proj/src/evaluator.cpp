#include "hstt/evaluator.hpp"

#include <cstdlib>

namespace hstt {

CostBreakdown CostBreakdown::weighted(std::int64_t f1, std::int64_t f2, std::int64_t f3,
                                      std::int64_t f4, std::int64_t f5, const Weights& w) {
  CostBreakdown c{f1, f2, f3, f4, f5, 0};
  c.total = w.w1 * f1 + w.w2 * f2 + w.w3 * f3 + w.w4 * f4 + w.w5 * f5;
  return c;
}

std::string CostBreakdown::csv_row() const {
  return std::to_string(f1) + "," + std::to_string(f2) + "," + std::to_string(f3) + "," +
         std::to_string(f4) + "," + std::to_string(f5) + "," + std::to_string(total);
}

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) {
  f1 += o.f1;
  f2 += o.f2;
  f3 += o.f3;
  f4 += o.f4;
  f5 += o.f5;
  total += o.total;
  return *this;
}

CostBreakdown operator-(const CostBreakdown& a, const CostBreakdown& b) {
  return {a.f1 - b.f1, a.f2 - b.f2, a.f3 - b.f3, a.f4 - b.f4, a.f5 - b.f5, a.total - b.total};
}

HardViolationReport audit_hard(const Instance& inst, std::span<const Placement> q) {
  HardViolationReport r;
  const auto& cal = inst.calendar();
  const int p = cal.periods();
  const int n = std::min<int>(inst.lesson_count(), static_cast<int>(q.size()));
  for (int l = 0; l < n; ++l) {
    if (!q[l]) continue;
    const Lesson& les = inst.lesson(l);
    const Period start = *q[l];
    if (start < 0 || start + les.duration > p ||
        start / cal.slots_per_day != (start + les.duration - 1) / cal.slots_per_day) {
      r.availability_count += les.duration;
      continue;
    }
    for (int k = 0; k < les.duration; ++k) {
      if (!inst.available(l, start + k)) ++r.availability_count;
    }
  }
  // One conflict per (pair of lessons, shared resource, shared period).
  for (int a = 0; a < n; ++a) {
    if (!q[a]) continue;
    const Lesson& la = inst.lesson(a);
    for (int b = a + 1; b < n; ++b) {
      if (!q[b]) continue;
      const Lesson& lb = inst.lesson(b);
      const int lo = std::max(*q[a], *q[b]);
      const int hi = std::min(*q[a] + la.duration, *q[b] + lb.duration);
      if (lo >= hi) continue;
      std::int64_t shared = 0;
      for (TeacherIndex t : la.teachers) {
        for (TeacherIndex u : lb.teachers) shared += (t == u);
      }
      for (ClassIndex c : la.classes) {
        for (ClassIndex d : lb.classes) shared += (c == d);
      }
      r.conflict_count += shared * (hi - lo);
    }
  }
  return r;
}

HardViolationReport audit_hard(const Instance& inst, const ScheduleState& s) {
  return audit_hard(inst, s.assignment());
}

namespace {

// Idle available cells strictly between the first and last busy cell of a day row.
template <typename Busy, typename Avail>
std::int64_t row_gaps(int first, int h, Busy busy, Avail avail) {
  int lo = -1, hi = -1;
  for (int j = 0; j < h; ++j) {
    if (busy(first + j)) {
      if (lo < 0) lo = j;
      hi = j;
    }
  }
  if (lo < 0) return 0;
  std::int64_t gaps = 0;
  for (int j = lo + 1; j < hi; ++j) {
    if (!busy(first + j) && avail(first + j)) ++gaps;
  }
  return gaps;
}

}  // namespace

std::int64_t class_day_gaps(const Instance& inst, const ScheduleState& s, ClassIndex c, int day) {
  const auto& av = inst.classes()[c].available;
  return row_gaps(
      inst.calendar().first_of_day(day), inst.calendar().slots_per_day,
      [&](Period q) { return s.class_at(c, q) != kEmpty; }, [&](Period q) { return av[q]; });
}

std::int64_t teacher_day_gaps(const Instance& inst, const ScheduleState& s, TeacherIndex t, int day) {
  const auto& av = inst.teachers()[t].available;
  return row_gaps(
      inst.calendar().first_of_day(day), inst.calendar().slots_per_day,
      [&](Period q) { return s.teacher_at(t, q) != kEmpty; }, [&](Period q) { return av[q]; });
}

bool class_day_unbalanced(const Instance& inst, const ScheduleState& s, ClassIndex c, int day) {
  const int h = inst.calendar().slots_per_day;
  const int first = inst.calendar().first_of_day(day);
  int complex_hours = 0;
  for (int j = 0; j < h; ++j) {
    const LessonIndex l = s.class_at(c, first + j);
    if (l != kEmpty && inst.complex_for(l, c)) ++complex_hours;
  }
  return complex_hours > (h + 1) / 2;
}

bool lesson_not_compact(const Instance& inst, const ScheduleState& s, LessonIndex l) {
  const auto q = s.placement(l);
  if (!q) return false;
  const int h = inst.calendar().slots_per_day;
  const int day = *q / h;
  for (LessonIndex o : inst.course_mates(l)) {
    const auto r = s.placement(o);
    if (r && std::abs(*r / h - day) <= 1) return true;
  }
  return false;
}

std::int64_t class_gaps(const Instance& inst, const ScheduleState& s) {
  std::int64_t n = 0;
  for (int c = 0; c < inst.class_count(); ++c) {
    for (int d = 0; d < inst.calendar().days; ++d) n += class_day_gaps(inst, s, c, d);
  }
  return n;
}

std::int64_t teacher_gaps(const Instance& inst, const ScheduleState& s) {
  std::int64_t n = 0;
  for (int t = 0; t < inst.teacher_count(); ++t) {
    for (int d = 0; d < inst.calendar().days; ++d) n += teacher_day_gaps(inst, s, t, d);
  }
  return n;
}

std::int64_t compactness_violations(const Instance& inst, const ScheduleState& s) {
  std::int64_t n = 0;
  for (int l = 0; l < inst.lesson_count(); ++l) n += lesson_not_compact(inst, s, l) ? 1 : 0;
  return n;
}

std::int64_t unbalance_violations(const Instance& inst, const ScheduleState& s) {
  std::int64_t n = 0;
  for (int c = 0; c < inst.class_count(); ++c) {
    for (int d = 0; d < inst.calendar().days; ++d) n += class_day_unbalanced(inst, s, c, d) ? 1 : 0;
  }
  return n;
}

std::int64_t unscheduled_count(const ScheduleState& s) { return s.unscheduled_count(); }

CostBreakdown total_cost(const Instance& inst, const ScheduleState& s) {
  return CostBreakdown::weighted(class_gaps(inst, s), teacher_gaps(inst, s),
                                 compactness_violations(inst, s), unbalance_violations(inst, s),
                                 unscheduled_count(s), inst.weights());
}

// ---------------------------------------------------------------------------

DeltaEvaluator::DeltaEvaluator(const Instance& inst)
    : inst_(&inst),
      class_day_stamp_(static_cast<std::size_t>(inst.class_count()) * inst.calendar().days, 0),
      teacher_day_stamp_(static_cast<std::size_t>(inst.teacher_count()) * inst.calendar().days, 0),
      lesson_stamp_(inst.lesson_count(), 0) {}

void DeltaEvaluator::collect(const Move& m) {
  ++stamp_;
  class_days_.clear();
  teacher_days_.clear();
  lessons_.clear();
  const int days = inst_->calendar().days;
  const int h = inst_->calendar().slots_per_day;
  auto touch_lesson = [&](LessonIndex l) {
    if (lesson_stamp_[l] != stamp_) {
      lesson_stamp_[l] = stamp_;
      lessons_.push_back(l);
    }
  };
  for (const auto& a : m.atoms) {
    const Lesson& les = inst_->lesson(a.lesson);
    const int day = a.period / h;
    for (ClassIndex c : les.classes) {
      const int key = c * days + day;
      if (class_day_stamp_[key] != stamp_) {
        class_day_stamp_[key] = stamp_;
        class_days_.push_back(key);
      }
    }
    for (TeacherIndex t : les.teachers) {
      const int key = t * days + day;
      if (teacher_day_stamp_[key] != stamp_) {
        teacher_day_stamp_[key] = stamp_;
        teacher_days_.push_back(key);
      }
    }
    touch_lesson(a.lesson);
    for (LessonIndex o : inst_->course_mates(a.lesson)) touch_lesson(o);
  }
}

DeltaEvaluator::Contribution DeltaEvaluator::measure(const ScheduleState& s) const {
  Contribution c;
  const int days = inst_->calendar().days;
  for (int key : class_days_) {
    c.f1 += class_day_gaps(*inst_, s, key / days, key % days);
    c.f4 += class_day_unbalanced(*inst_, s, key / days, key % days) ? 1 : 0;
  }
  for (int key : teacher_days_) c.f2 += teacher_day_gaps(*inst_, s, key / days, key % days);
  for (LessonIndex l : lessons_) c.f3 += lesson_not_compact(*inst_, s, l) ? 1 : 0;
  return c;
}

CostBreakdown DeltaEvaluator::delta(ScheduleState& s, const Move& m) {
  if (m.empty()) return {};
  collect(m);
  const Contribution before = measure(s);
  const int u_before = s.unscheduled_count();
  apply_move(*inst_, s, m);
  const Contribution after = measure(s);
  const int u_after = s.unscheduled_count();
  revert_move(*inst_, s, m);
  return CostBreakdown::weighted(after.f1 - before.f1, after.f2 - before.f2, after.f3 - before.f3,
                                 after.f4 - before.f4, u_after - u_before, inst_->weights());
}

CostBreakdown delta_cost(const Instance& inst, const ScheduleState& s, const Move& m) {
  ScheduleState scratch = s;
  DeltaEvaluator ev(inst);
  return ev.delta(scratch, m);
}

}  // namespace hstt
