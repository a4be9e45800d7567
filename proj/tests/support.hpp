#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hstt/evaluator.hpp"
#include "hstt/instance.hpp"
#include "hstt/schedule.hpp"

namespace testing {

using namespace hstt;

// Builds small instances by id. Unset availability means always available.
class Builder {
 public:
  Builder(int days, int slots) : cal_{days, slots} {}

  Builder& teacher(const std::string& id, std::vector<int> unavailable = {});
  Builder& klass(const std::string& id, std::vector<int> unavailable = {});
  Builder& subject(const std::string& id, std::vector<std::string> complex_for = {});
  // tuples as {teacher, class, subject}; course defaults to the lesson id.
  Builder& lesson(const std::string& id, std::vector<std::vector<std::string>> tuples, int duration = 1,
                  LessonKind kind = LessonKind::simple, const std::string& course = "");
  Builder& weights(Weights w) {
    weights_ = w;
    return *this;
  }
  Instance build() const;

 private:
  int index_of(const std::vector<std::string>& ids, const std::string& id) const;

  Calendar cal_;
  std::vector<std::string> teacher_ids_, class_ids_, subject_ids_;
  std::vector<std::vector<int>> teacher_off_, class_off_;
  std::vector<std::vector<std::string>> complex_;
  struct PendingLesson {
    std::string id;
    std::vector<std::vector<std::string>> tuples;
    int duration;
    LessonKind kind;
    std::string course;
  };
  std::vector<PendingLesson> lessons_;
  Weights weights_;
};

using TestRng = std::mt19937_64;

// Random instance with at most max_lessons lessons: small calendar, random
// availability holes, complex subjects, two-lesson courses and a few
// two-class half-switch lessons.
Instance random_instance(TestRng& rng, int max_lessons = 20);

// Random hard-feasible state: lessons in random order, each placed at a random
// feasible period with probability place_prob.
ScheduleState random_state(const Instance& inst, TestRng& rng, double place_prob = 0.8);

// Independent recomputation of F1..F5 from the assignment alone. It never looks
// at the teacher/class tables of a ScheduleState.
CostBreakdown oracle_cost(const Instance& inst, const std::vector<Placement>& q);
CostBreakdown oracle_cost(const Instance& inst, const ScheduleState& s);

std::vector<Placement> assignment_of(const ScheduleState& s);

}  // namespace testing
