#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace testing {

Builder& Builder::teacher(const std::string& id, std::vector<int> unavailable) {
  teacher_ids_.push_back(id);
  teacher_off_.push_back(std::move(unavailable));
  return *this;
}

Builder& Builder::klass(const std::string& id, std::vector<int> unavailable) {
  class_ids_.push_back(id);
  class_off_.push_back(std::move(unavailable));
  return *this;
}

Builder& Builder::subject(const std::string& id, std::vector<std::string> complex_for) {
  subject_ids_.push_back(id);
  complex_.push_back(std::move(complex_for));
  return *this;
}

Builder& Builder::lesson(const std::string& id, std::vector<std::vector<std::string>> tuples, int duration,
                         LessonKind kind, const std::string& course) {
  lessons_.push_back({id, std::move(tuples), duration, kind, course.empty() ? id : course});
  return *this;
}

int Builder::index_of(const std::vector<std::string>& ids, const std::string& id) const {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw std::invalid_argument("fixture references unknown id " + id);
  return static_cast<int>(it - ids.begin());
}

Instance Builder::build() const {
  const int p = cal_.periods();
  auto grid = [&](const std::vector<int>& off) {
    std::vector<bool> av(p, true);
    for (int q : off) av[q] = false;
    return av;
  };
  std::vector<Teacher> teachers;
  for (std::size_t i = 0; i < teacher_ids_.size(); ++i) teachers.push_back({teacher_ids_[i], grid(teacher_off_[i])});
  std::vector<SchoolClass> classes;
  for (std::size_t i = 0; i < class_ids_.size(); ++i) {
    classes.push_back({class_ids_[i], grid(class_off_[i]), std::nullopt});
  }
  std::vector<Subject> subjects;
  for (std::size_t i = 0; i < subject_ids_.size(); ++i) {
    Subject s{subject_ids_[i], {}};
    for (const auto& c : complex_[i]) s.complex_for.push_back(index_of(class_ids_, c));
    subjects.push_back(std::move(s));
  }
  std::vector<Course> courses;
  std::vector<std::string> course_ids;
  std::vector<Lesson> lessons;
  for (const auto& pl : lessons_) {
    auto it = std::find(course_ids.begin(), course_ids.end(), pl.course);
    if (it == course_ids.end()) {
      course_ids.push_back(pl.course);
      courses.push_back({pl.course, {}});
      it = course_ids.end() - 1;
    }
    const int course = static_cast<int>(it - course_ids.begin());
    courses[course].structure.push_back(pl.duration);
    Lesson l;
    l.id = pl.id;
    l.duration = pl.duration;
    l.kind = pl.kind;
    l.courses = {course};
    for (const auto& t : pl.tuples) {
      l.tuples.push_back({index_of(teacher_ids_, t.at(0)), index_of(class_ids_, t.at(1)), index_of(subject_ids_, t.at(2))});
    }
    lessons.push_back(std::move(l));
  }
  return Instance(cal_, std::move(teachers), std::move(classes), std::move(subjects), std::move(courses),
                  std::move(lessons), weights_);
}

Instance random_instance(TestRng& rng, int max_lessons) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double pr) { return std::bernoulli_distribution(pr)(rng); };
  const int days = pick(2, 4);
  const int slots = pick(2, 4);
  const int p = days * slots;
  Builder b(days, slots);
  const int nt = pick(2, 5), nc = pick(2, 4), ns = pick(2, 4);
  auto holes = [&] {
    std::vector<int> off;
    for (int q = 0; q < p; ++q) {
      if (coin(0.15)) off.push_back(q);
    }
    return off;
  };
  for (int t = 0; t < nt; ++t) b.teacher("t" + std::to_string(t), holes());
  for (int c = 0; c < nc; ++c) b.klass("c" + std::to_string(c), holes());
  for (int s = 0; s < ns; ++s) {
    std::vector<std::string> cx;
    for (int c = 0; c < nc; ++c) {
      if (coin(0.4)) cx.push_back("c" + std::to_string(c));
    }
    b.subject("s" + std::to_string(s), cx);
  }
  const int n = pick(3, max_lessons);
  int made = 0;
  while (made < n) {
    const std::string id = "l" + std::to_string(made);
    const std::string t = "t" + std::to_string(pick(0, nt - 1));
    const std::string c = "c" + std::to_string(pick(0, nc - 1));
    const std::string s = "s" + std::to_string(pick(0, ns - 1));
    if (nt >= 2 && nc >= 2 && coin(0.1)) {
      // two classes, two teachers, one period
      const int t0 = pick(0, nt - 1), t1 = (t0 + 1) % nt;
      const int c0 = pick(0, nc - 1), c1 = (c0 + 1) % nc;
      b.lesson(id,
               {{"t" + std::to_string(t0), "c" + std::to_string(c0), s},
                {"t" + std::to_string(t1), "c" + std::to_string(c0), s},
                {"t" + std::to_string(t0), "c" + std::to_string(c1), s},
                {"t" + std::to_string(t1), "c" + std::to_string(c1), s}},
               1, LessonKind::half_switch);
      ++made;
      continue;
    }
    const int dur = std::min(slots, coin(0.3) ? 2 : 1);
    if (made + 1 < n && coin(0.35)) {
      // two-lesson course
      b.lesson(id + "a", {{t, c, s}}, dur, LessonKind::simple, "k" + id);
      b.lesson(id + "b", {{t, c, s}}, 1, LessonKind::simple, "k" + id);
      made += 2;
    } else {
      b.lesson(id, {{t, c, s}}, dur);
      ++made;
    }
  }
  return b.build();
}

ScheduleState random_state(const Instance& inst, TestRng& rng, double place_prob) {
  ScheduleState s(inst);
  std::vector<LessonIndex> order(inst.lesson_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (LessonIndex l : order) {
    if (!std::bernoulli_distribution(place_prob)(rng)) continue;
    const auto options = feasible_periods(inst, s, l);
    if (options.empty()) continue;
    s.place(inst, l, options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]);
  }
  return s;
}

std::vector<Placement> assignment_of(const ScheduleState& s) {
  return {s.assignment().begin(), s.assignment().end()};
}

CostBreakdown oracle_cost(const Instance& inst, const std::vector<Placement>& q) {
  const int days = inst.calendar().days;
  const int h = inst.calendar().slots_per_day;
  const int L = inst.lesson_count();

  auto covers = [&](LessonIndex l, int period) {
    return q[l] && *q[l] <= period && period < *q[l] + inst.lesson(l).duration;
  };
  auto has_class = [&](LessonIndex l, int c) {
    for (const auto& t : inst.lesson(l).tuples) {
      if (t.klass == c) return true;
    }
    return false;
  };
  auto has_teacher = [&](LessonIndex l, int teacher) {
    for (const auto& t : inst.lesson(l).tuples) {
      if (t.teacher == teacher) return true;
    }
    return false;
  };
  auto gaps = [&](auto busy, const std::vector<bool>& avail) {
    std::int64_t n = 0;
    for (int d = 0; d < days; ++d) {
      std::vector<int> hit;
      for (int j = 0; j < h; ++j) {
        if (busy(d * h + j)) hit.push_back(j);
      }
      if (hit.size() < 2) continue;
      for (int j = hit.front() + 1; j < hit.back(); ++j) {
        if (!busy(d * h + j) && avail[d * h + j]) ++n;
      }
    }
    return n;
  };

  std::int64_t f1 = 0, f2 = 0, f3 = 0, f4 = 0, f5 = 0;
  for (int c = 0; c < inst.class_count(); ++c) {
    auto busy = [&](int period) {
      for (LessonIndex l = 0; l < L; ++l) {
        if (covers(l, period) && has_class(l, c)) return true;
      }
      return false;
    };
    f1 += gaps(busy, inst.classes()[c].available);
  }
  for (int t = 0; t < inst.teacher_count(); ++t) {
    auto busy = [&](int period) {
      for (LessonIndex l = 0; l < L; ++l) {
        if (covers(l, period) && has_teacher(l, t)) return true;
      }
      return false;
    };
    f2 += gaps(busy, inst.teachers()[t].available);
  }
  for (LessonIndex l = 0; l < L; ++l) {
    if (!q[l]) {
      ++f5;
      continue;
    }
    bool flagged = false;
    for (LessonIndex o = 0; o < L && !flagged; ++o) {
      if (o == l || !q[o]) continue;
      bool shared = false;
      for (int a : inst.lesson(l).courses) {
        for (int b : inst.lesson(o).courses) shared = shared || a == b;
      }
      flagged = shared && std::abs(*q[l] / h - *q[o] / h) <= 1;
    }
    f3 += flagged;
  }
  auto complex_in = [&](LessonIndex l, int c) {
    for (const auto& t : inst.lesson(l).tuples) {
      if (t.klass != c) continue;
      const auto& cx = inst.subjects()[t.subject].complex_for;
      if (std::find(cx.begin(), cx.end(), c) != cx.end()) return true;
    }
    return false;
  };
  for (int c = 0; c < inst.class_count(); ++c) {
    for (int d = 0; d < days; ++d) {
      int hours = 0;
      for (int j = 0; j < h; ++j) {
        for (LessonIndex l = 0; l < L; ++l) {
          if (covers(l, d * h + j) && has_class(l, c) && complex_in(l, c)) {
            ++hours;
            break;
          }
        }
      }
      f4 += hours > std::ceil(h / 2.0) ? 1 : 0;
    }
  }
  return CostBreakdown::weighted(f1, f2, f3, f4, f5, inst.weights());
}

CostBreakdown oracle_cost(const Instance& inst, const ScheduleState& s) { return oracle_cost(inst, assignment_of(s)); }

}  // namespace testing
