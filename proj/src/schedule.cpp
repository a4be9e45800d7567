#include "hstt/schedule.hpp"

#include <stdexcept>

namespace hstt {

ScheduleState::ScheduleState(const Instance& inst)
    : periods_(inst.periods()),
      assignment_(inst.lesson_count(), kUnscheduled),
      tpb_(static_cast<std::size_t>(inst.teacher_count()) * inst.periods(), kEmpty),
      cpb_(static_cast<std::size_t>(inst.class_count()) * inst.periods(), kEmpty),
      unscheduled_count_(inst.lesson_count()) {}

std::vector<LessonIndex> ScheduleState::unscheduled() const {
  std::vector<LessonIndex> u;
  u.reserve(unscheduled_count_);
  for (int l = 0; l < lesson_count(); ++l) {
    if (!assignment_[l]) u.push_back(l);
  }
  return u;
}

bool ScheduleState::collision_free(const Instance& inst, LessonIndex l, Period q) const {
  const Lesson& les = inst.lesson(l);
  if (q < 0 || q + les.duration > periods_) return false;
  for (int k = 0; k < les.duration; ++k) {
    for (TeacherIndex t : les.teachers) {
      const LessonIndex o = tpb_[t * periods_ + q + k];
      if (o != kEmpty && o != l) return false;
    }
    for (ClassIndex c : les.classes) {
      const LessonIndex o = cpb_[c * periods_ + q + k];
      if (o != kEmpty && o != l) return false;
    }
  }
  return true;
}

void ScheduleState::place(const Instance& inst, LessonIndex l, Period q) {
  if (assignment_[l]) throw std::logic_error("place: lesson '" + inst.lesson(l).id + "' already placed");
  const Lesson& les = inst.lesson(l);
  if (q < 0 || q + les.duration > periods_) throw std::logic_error("place: span outside calendar");
  if (!collision_free(inst, l, q)) {
    throw std::logic_error("place: lesson '" + les.id + "' collides at period " + std::to_string(q));
  }
  for (int k = 0; k < les.duration; ++k) {
    for (TeacherIndex t : les.teachers) tpb_[t * periods_ + q + k] = l;
    for (ClassIndex c : les.classes) cpb_[c * periods_ + q + k] = l;
  }
  assignment_[l] = q;
  --unscheduled_count_;
}

void ScheduleState::remove(const Instance& inst, LessonIndex l) {
  if (!assignment_[l]) return;
  const Lesson& les = inst.lesson(l);
  const Period q = *assignment_[l];
  for (int k = 0; k < les.duration; ++k) {
    for (TeacherIndex t : les.teachers) tpb_[t * periods_ + q + k] = kEmpty;
    for (ClassIndex c : les.classes) cpb_[c * periods_ + q + k] = kEmpty;
  }
  assignment_[l] = kUnscheduled;
  ++unscheduled_count_;
}

void ScheduleState::assign(const Instance& inst, LessonIndex l, Placement q) {
  remove(inst, l);
  if (q) place(inst, l, *q);
}

std::vector<Period> feasible_periods(const Instance& inst, const ScheduleState& s, LessonIndex l) {
  std::vector<Period> out;
  for (Period q : inst.placeable_starts(l)) {
    if (s.collision_free(inst, l, q)) out.push_back(q);
  }
  return out;
}

int feasible_period_count(const Instance& inst, const ScheduleState& s, LessonIndex l) {
  int n = 0;
  for (Period q : inst.placeable_starts(l)) n += s.collision_free(inst, l, q) ? 1 : 0;
  return n;
}

ScheduleState apply_assignment(const Instance& inst, ScheduleState s, LessonIndex l, Placement q) {
  s.assign(inst, l, q);
  return s;
}

std::optional<std::string> check_consistency(const Instance& inst, const ScheduleState& s) {
  const int p = inst.periods();
  std::vector<LessonIndex> tpb(static_cast<std::size_t>(inst.teacher_count()) * p, kEmpty);
  std::vector<LessonIndex> cpb(static_cast<std::size_t>(inst.class_count()) * p, kEmpty);
  int unscheduled = 0;
  for (int l = 0; l < inst.lesson_count(); ++l) {
    const auto q = s.placement(l);
    if (!q) {
      ++unscheduled;
      continue;
    }
    const Lesson& les = inst.lesson(l);
    if (*q < 0 || *q + les.duration > p) return "lesson " + les.id + " spans outside calendar";
    for (int k = 0; k < les.duration; ++k) {
      for (TeacherIndex t : les.teachers) {
        auto& cell = tpb[t * p + *q + k];
        if (cell != kEmpty) return "teacher cell claimed twice by " + les.id;
        cell = l;
      }
      for (ClassIndex c : les.classes) {
        auto& cell = cpb[c * p + *q + k];
        if (cell != kEmpty) return "class cell claimed twice by " + les.id;
        cell = l;
      }
    }
  }
  for (int t = 0; t < inst.teacher_count(); ++t) {
    for (int q = 0; q < p; ++q) {
      if (s.teacher_at(t, q) != tpb[t * p + q]) {
        return "tpb mismatch at teacher " + inst.teachers()[t].id + " period " + std::to_string(q);
      }
    }
  }
  for (int c = 0; c < inst.class_count(); ++c) {
    for (int q = 0; q < p; ++q) {
      if (s.class_at(c, q) != cpb[c * p + q]) {
        return "cpb mismatch at class " + inst.classes()[c].id + " period " + std::to_string(q);
      }
    }
  }
  if (unscheduled != s.unscheduled_count()) return std::string("unscheduled count mismatch");
  return std::nullopt;
}

ScheduleState state_from_assignment(const Instance& inst, std::span<const Placement> q) {
  if (static_cast<int>(q.size()) != inst.lesson_count()) {
    throw InstanceError("assignment size does not match lesson count");
  }
  ScheduleState s(inst);
  for (int l = 0; l < inst.lesson_count(); ++l) {
    if (!q[l]) continue;
    if (!inst.placeable(l, *q[l])) {
      throw InstanceError("lesson '" + inst.lesson(l).id + "' cannot start at period " +
                          std::to_string(*q[l]));
    }
    if (!s.collision_free(inst, l, *q[l])) {
      throw InstanceError("lesson '" + inst.lesson(l).id + "' collides at period " +
                          std::to_string(*q[l]));
    }
    s.place(inst, l, *q[l]);
  }
  return s;
}

void apply_move(const Instance& inst, ScheduleState& s, const Move& m) {
  for (const auto& a : m.atoms) {
    if (a.dir != Direction::out) continue;
    if (s.placement(a.lesson) != a.period) throw std::logic_error("apply_move: stale out-atom");
    s.remove(inst, a.lesson);
  }
  for (const auto& a : m.atoms) {
    if (a.dir == Direction::in) s.place(inst, a.lesson, a.period);
  }
}

void revert_move(const Instance& inst, ScheduleState& s, const Move& m) {
  for (auto it = m.atoms.rbegin(); it != m.atoms.rend(); ++it) {
    if (it->dir == Direction::in) s.remove(inst, it->lesson);
  }
  for (const auto& a : m.atoms) {
    if (a.dir == Direction::out) s.place(inst, a.lesson, a.period);
  }
}

}  // namespace hstt
