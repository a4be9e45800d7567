#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hstt/instance.hpp"

namespace hstt {

/// Q(l): a start period, or nullopt when the lesson is unscheduled.
using Placement = std::optional<Period>;
inline constexpr Placement kUnscheduled = std::nullopt;

/// Assignment Q of lessons to start periods plus the redundant teacher x period
/// and class x period tables. A cell holds at most one lesson, so H1 holds by
/// construction; place() refuses to overwrite an occupied cell.
class ScheduleState {
 public:
  ScheduleState() = default;
  explicit ScheduleState(const Instance& inst);

  Placement placement(LessonIndex l) const { return assignment_[l]; }
  bool scheduled(LessonIndex l) const { return assignment_[l].has_value(); }
  std::span<const Placement> assignment() const { return assignment_; }

  LessonIndex teacher_at(TeacherIndex t, Period q) const { return tpb_[t * periods_ + q]; }
  LessonIndex class_at(ClassIndex c, Period q) const { return cpb_[c * periods_ + q]; }

  /// U(s), ascending.
  std::vector<LessonIndex> unscheduled() const;
  int unscheduled_count() const { return unscheduled_count_; }
  int lesson_count() const { return static_cast<int>(assignment_.size()); }
  int periods() const { return periods_; }

  /// True when l could occupy [q, q+duration) without touching an occupied cell
  /// (cells held by l itself count as free). Does not check availability.
  bool collision_free(const Instance& inst, LessonIndex l, Period q) const;

  void place(const Instance& inst, LessonIndex l, Period q);
  void remove(const Instance& inst, LessonIndex l);
  /// Moves l to q (or unschedules it), clearing its previous cells first.
  void assign(const Instance& inst, LessonIndex l, Placement q);

  bool operator==(const ScheduleState&) const = default;

 private:
  int periods_ = 0;
  std::vector<Placement> assignment_;
  std::vector<LessonIndex> tpb_;
  std::vector<LessonIndex> cpb_;
  int unscheduled_count_ = 0;
};

/// Start periods where l may be placed given the current schedule: available over
/// the whole span, inside one day, on a day edge when edge-preferring, and clear of
/// every other scheduled lesson.
std::vector<Period> feasible_periods(const Instance& inst, const ScheduleState& s, LessonIndex l);
int feasible_period_count(const Instance& inst, const ScheduleState& s, LessonIndex l);

ScheduleState apply_assignment(const Instance& inst, ScheduleState s, LessonIndex l, Placement q);

/// Full audit of the Q <-> tpb/cpb consistency invariant. Returns a description of
/// the first breach, or nullopt when consistent.
std::optional<std::string> check_consistency(const Instance& inst, const ScheduleState& s);

/// Builds a state from an explicit assignment; throws InstanceError when the
/// assignment collides or places a lesson outside its placeable periods.
ScheduleState state_from_assignment(const Instance& inst, std::span<const Placement> q);

// ---------------------------------------------------------------------------
// Moves

enum class Direction { in, out };

/// One <lesson, period, dir> element. For `out`, period is where the lesson sat
/// before the move.
struct MoveAtom {
  LessonIndex lesson = 0;
  Period period = 0;
  Direction dir = Direction::in;

  bool operator==(const MoveAtom&) const = default;
};

/// Composite neighbourhood step. Atom order: the primary insertion, then the
/// out-atoms (the primary's vacated period for intra moves, then ejected
/// lessons), then the re-insertions of ejected lessons.
struct Move {
  std::vector<MoveAtom> atoms;
  LessonIndex primary_lesson = -1;
  Period primary_period = 0;

  bool empty() const { return atoms.empty(); }
  bool operator==(const Move&) const = default;
};

/// Applies m: every out-atom is removed first, then in-atoms are placed in order.
/// Throws std::logic_error when m does not fit s.
void apply_move(const Instance& inst, ScheduleState& s, const Move& m);
/// Exact inverse of apply_move on the state produced by it.
void revert_move(const Instance& inst, ScheduleState& s, const Move& m);

}  // namespace hstt
