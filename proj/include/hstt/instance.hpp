#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hstt {

using Period = int;
using LessonIndex = int;
using TeacherIndex = int;
using ClassIndex = int;
using SubjectIndex = int;
using CourseIndex = int;

/// Cell value of the teacher/class timetables when nothing is placed there.
inline constexpr LessonIndex kEmpty = -1;

/// Raised for malformed or inconsistent instance data.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weekly grid of `days` x `slots_per_day` periods, indexed row-major by day.
struct Calendar {
  int days = 0;
  int slots_per_day = 0;

  int periods() const { return days * slots_per_day; }
  /// Day of period q; throws std::out_of_range outside [0, periods()).
  int day_of(Period q) const;
  int slot_of(Period q) const;
  Period first_of_day(int day) const { return day * slots_per_day; }

  bool operator==(const Calendar&) const = default;
};

int period_day(Period q, const Calendar& cal);

enum class LessonKind { simple, half_switch, double_lesson, half_loop, half_chain };

std::string_view to_string(LessonKind kind);
LessonKind lesson_kind_from_string(std::string_view text);

struct SessionTuple {
  TeacherIndex teacher = 0;
  ClassIndex klass = 0;
  SubjectIndex subject = 0;

  bool operator==(const SessionTuple&) const = default;
};

/// Generator annotation marking a session as part of a deliberately planted block.
struct PlantedTag {
  LessonKind kind = LessonKind::simple;
  int group = 0;

  bool operator==(const PlantedTag&) const = default;
};

struct Lesson {
  std::string id;
  std::vector<SessionTuple> tuples;
  int duration = 1;
  LessonKind kind = LessonKind::simple;
  bool edge_preference = false;
  // Exactly one course for input lessons; composite blocks carry the union of their members'.
  std::vector<CourseIndex> courses;
  std::optional<PlantedTag> planted;

  // Sorted projections of `tuples`, filled in by Instance.
  std::vector<TeacherIndex> teachers;
  std::vector<ClassIndex> classes;

  bool operator==(const Lesson&) const = default;
};

struct Teacher {
  std::string id;
  std::vector<bool> available;  // one flag per period

  bool operator==(const Teacher&) const = default;
};

struct SchoolClass {
  std::string id;
  std::vector<bool> available;
  std::optional<std::string> curriculum;

  bool operator==(const SchoolClass&) const = default;
};

struct Subject {
  std::string id;
  std::vector<ClassIndex> complex_for;

  bool operator==(const Subject&) const = default;
};

struct Course {
  std::string id;
  std::vector<int> structure;

  bool operator==(const Course&) const = default;
};

struct Weights {
  std::int64_t w1 = 100;  // class gaps
  std::int64_t w2 = 40;   // teacher gaps
  std::int64_t w3 = 30;   // compactness
  std::int64_t w4 = 60;   // balance
  std::int64_t w5 = 1000; // unscheduled lessons

  bool operator==(const Weights&) const = default;
};

/// Immutable problem description. The constructor validates cross references and
/// materializes the availability and complexity lookups used by every later phase.
class Instance {
 public:
  Instance(Calendar calendar, std::vector<Teacher> teachers, std::vector<SchoolClass> classes,
           std::vector<Subject> subjects, std::vector<Course> courses, std::vector<Lesson> lessons,
           Weights weights = {});

  const Calendar& calendar() const { return calendar_; }
  int periods() const { return calendar_.periods(); }
  const std::vector<Teacher>& teachers() const { return teachers_; }
  const std::vector<SchoolClass>& classes() const { return classes_; }
  const std::vector<Subject>& subjects() const { return subjects_; }
  const std::vector<Course>& courses() const { return courses_; }
  const std::vector<Lesson>& lessons() const { return lessons_; }
  const Lesson& lesson(LessonIndex l) const { return lessons_[l]; }
  int lesson_count() const { return static_cast<int>(lessons_.size()); }
  int teacher_count() const { return static_cast<int>(teachers_.size()); }
  int class_count() const { return static_cast<int>(classes_.size()); }
  const Weights& weights() const { return weights_; }

  /// avl(l, q): every teacher and class of l is available at q.
  bool available(LessonIndex l, Period q) const { return avl_[l * periods() + q] != 0; }
  /// cplx(l, c): some tuple of l teaching class c uses a subject marked complex for c.
  bool complex_for(LessonIndex l, ClassIndex c) const { return cplx_[l * class_count() + c] != 0; }
  bool same_course(LessonIndex a, LessonIndex b) const;
  /// Lessons other than l sharing at least one course with l, ascending.
  const std::vector<LessonIndex>& course_mates(LessonIndex l) const { return mates_[l]; }
  /// Start periods where l fits the day, is available over its whole span, and
  /// honours its edge preference. Independent of any schedule.
  const std::vector<Period>& placeable_starts(LessonIndex l) const { return placeable_[l]; }
  bool placeable(LessonIndex l, Period q) const;

  /// #a: number of (lesson, period) pairs with avl = 1.
  std::int64_t available_pair_count() const;

  std::optional<LessonIndex> find_lesson(std::string_view id) const;
  std::optional<TeacherIndex> find_teacher(std::string_view id) const;
  std::optional<ClassIndex> find_class(std::string_view id) const;

  Instance with_weights(const Weights& w) const;
  Instance with_lessons(std::vector<Lesson> lessons) const;

  bool operator==(const Instance& other) const;

 private:
  void validate_and_index();

  Calendar calendar_;
  std::vector<Teacher> teachers_;
  std::vector<SchoolClass> classes_;
  std::vector<Subject> subjects_;
  std::vector<Course> courses_;
  std::vector<Lesson> lessons_;
  Weights weights_;

  std::vector<std::uint8_t> avl_;
  std::vector<std::uint8_t> cplx_;
  std::vector<std::vector<LessonIndex>> mates_;
  std::vector<std::vector<Period>> placeable_;
};

/// Parses the JSON instance format. Syntax errors report the byte offset.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);
Instance load_instance(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace hstt
