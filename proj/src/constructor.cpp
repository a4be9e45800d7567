#include "hstt/constructor.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace hstt {

int lesson_priority(const Instance& inst, const ScheduleState& s, LessonIndex l) {
  return feasible_period_count(inst, s, l);
}

namespace {

std::optional<Period> argmin_contention(const std::vector<Period>& own, const std::vector<int>& contention) {
  std::optional<Period> best;
  int best_count = std::numeric_limits<int>::max();
  for (Period q : own) {
    if (contention[q] < best_count) {
      best_count = contention[q];
      best = q;
    }
  }
  return best;
}

}  // namespace

std::optional<Period> select_period(const Instance& inst, const ScheduleState& s, LessonIndex l) {
  const auto own = feasible_periods(inst, s, l);
  if (own.empty()) return std::nullopt;
  std::vector<int> contention(inst.periods(), 0);
  for (LessonIndex o : s.unscheduled()) {
    if (o == l) continue;
    for (Period q : feasible_periods(inst, s, o)) ++contention[q];
  }
  return argmin_contention(own, contention);
}

ScheduleState build_initial(const Instance& inst, const ConstructorOptions& opts) {
  ScheduleState s(inst);
  const int n = inst.lesson_count();
  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  if (opts.shuffle_ties) {
    std::mt19937_64 rng(opts.seed);
    std::shuffle(rank.begin(), rank.end(), rng);
  }

  // Placements only shrink feasible sets, so a lesson that hits zero stays stuck.
  std::vector<bool> stuck(n, false);
  std::vector<std::vector<Period>> feasible(n);
  std::vector<int> contention(inst.periods());
  while (true) {
    std::vector<LessonIndex> open;
    for (LessonIndex l = 0; l < n; ++l) {
      if (s.scheduled(l) || stuck[l]) continue;
      feasible[l] = feasible_periods(inst, s, l);
      if (feasible[l].empty()) {
        stuck[l] = true;
      } else {
        open.push_back(l);
      }
    }
    if (open.empty()) break;

    LessonIndex chosen = open.front();
    for (LessonIndex l : open) {
      const auto key = std::make_pair(feasible[l].size(), rank[l]);
      if (key < std::make_pair(feasible[chosen].size(), rank[chosen])) chosen = l;
    }
    std::fill(contention.begin(), contention.end(), 0);
    for (LessonIndex o : open) {
      if (o == chosen) continue;
      for (Period q : feasible[o]) ++contention[q];
    }
    const Period q = *argmin_contention(feasible[chosen], contention);
    if (opts.on_place) opts.on_place(s, chosen, q);
    s.place(inst, chosen, q);
  }
  return s;
}

}  // namespace hstt
