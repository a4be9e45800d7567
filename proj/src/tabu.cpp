#include "hstt/tabu.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hstt {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::ts: return "ts";
    case Variant::tsi: return "tsi";
    case Variant::tsd: return "tsd";
    case Variant::tsdi: return "tsdi";
  }
  return "ts";
}

Variant variant_from_string(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (auto v : {Variant::ts, Variant::tsi, Variant::tsd, Variant::tsdi}) {
    if (to_string(v) == lower) return v;
  }
  throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

std::string_view to_string(MoveType t) { return t == MoveType::out_in ? "out_in" : "intra"; }

void SolverConfig::validate() const {
  if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  if (div_activation <= 0 || iterations_div <= 0 || intra_activation <= 0) {
    throw std::invalid_argument("divActivation, iterationsDiv and IntraActivation must be positive");
  }
  if (iterations_div >= div_activation) {
    throw std::invalid_argument("iterationsDiv must be smaller than divActivation");
  }
}

TabuList::TabuList(int lessons, int periods)
    : periods_(periods), expiry_(static_cast<std::size_t>(lessons) * periods, 0) {}

void TabuList::add(LessonIndex l, Period q, int expiry) {
  auto& e = expiry_[l * periods_ + q];
  e = std::max(e, expiry);
}

TransitionMemory::TransitionMemory(int lessons, int periods)
    : periods_(periods), z_(static_cast<std::size_t>(lessons) * periods, 0) {}

void TransitionMemory::record(LessonIndex l, Period q) {
  max_ = std::max(max_, ++z_[l * periods_ + q]);
}

void TransitionMemory::clear() {
  std::fill(z_.begin(), z_.end(), 0);
  max_ = 0;
}

bool TransitionMemory::all_zero() const {
  return std::all_of(z_.begin(), z_.end(), [](int v) { return v == 0; });
}

Move generate_move(const Instance& inst, ScheduleState& s, LessonIndex l, Period q) {
  if (!inst.placeable(l, q)) {
    throw std::invalid_argument("lesson '" + inst.lesson(l).id + "' cannot start at period " +
                                std::to_string(q));
  }
  Move m;
  m.primary_lesson = l;
  m.primary_period = q;
  const Placement old = s.placement(l);
  if (old == q) return m;

  m.atoms.push_back({l, q, Direction::in});
  if (old) {
    m.atoms.push_back({l, *old, Direction::out});
    s.remove(inst, l);
  }
  const Lesson& les = inst.lesson(l);
  std::vector<LessonIndex> ejected;
  auto eject = [&](LessonIndex o) {
    if (o == kEmpty || std::find(ejected.begin(), ejected.end(), o) != ejected.end()) return;
    ejected.push_back(o);
  };
  for (int k = 0; k < les.duration; ++k) {
    for (TeacherIndex t : les.teachers) eject(s.teacher_at(t, q + k));
    for (ClassIndex c : les.classes) eject(s.class_at(c, q + k));
  }
  for (LessonIndex o : ejected) {
    m.atoms.push_back({o, *s.placement(o), Direction::out});
    s.remove(inst, o);
  }
  s.place(inst, l, q);
  for (LessonIndex o : ejected) {
    for (Period r : inst.placeable_starts(o)) {
      if (s.collision_free(inst, o, r)) {
        s.place(inst, o, r);
        m.atoms.push_back({o, r, Direction::in});
        break;
      }
    }
  }
  revert_move(inst, s, m);
  return m;
}

std::vector<LessonIndex> candidate_lessons(const Instance& inst, const ScheduleState& s, MoveType type) {
  std::vector<std::pair<int, LessonIndex>> keyed;
  for (LessonIndex l = 0; l < inst.lesson_count(); ++l) {
    if (s.scheduled(l) == (type == MoveType::intra)) {
      keyed.emplace_back(feasible_period_count(inst, s, l), l);
    }
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<LessonIndex> out;
  out.reserve(keyed.size());
  for (const auto& [count, l] : keyed) out.push_back(l);
  return out;
}

bool is_tabu(const TabuList& tl, const Move& m, int iter) {
  return std::any_of(m.atoms.begin(), m.atoms.end(), [&](const MoveAtom& a) {
    return a.dir == Direction::in && tl.active(a.lesson, a.period, iter);
  });
}

std::pair<int, int> tenure_range(int lesson_count) {
  // ceil(sqrt(n) / 4) and floor(2 sqrt(n)) in exact integer arithmetic.
  int lo = 0;
  while (16LL * lo * lo < lesson_count) ++lo;
  int hi = 0;
  while (static_cast<long long>(hi + 1) * (hi + 1) <= 4LL * lesson_count) ++hi;
  return {lo, std::max(lo, hi)};
}

int tenure_sample(int lesson_count, Rng& rng) {
  const auto [lo, hi] = tenure_range(lesson_count);
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double move_penalty(const TransitionMemory& mem, const Move& m, std::int64_t current_cost) {
  if (mem.max() == 0 || m.atoms.empty()) return 0.0;
  double ratio_sum = 0.0;
  for (const auto& a : m.atoms) {
    if (a.dir == Direction::in) ratio_sum += static_cast<double>(mem.count(a.lesson, a.period)) / mem.max();
  }
  return ratio_sum / static_cast<double>(m.atoms.size()) * static_cast<double>(current_cost);
}

std::optional<SelectedMove> select_move(const Instance& inst, ScheduleState& s, DeltaEvaluator& eval,
                                        const std::vector<LessonIndex>& candidates,
                                        const SelectionContext& ctx, Rng& rng) {
  // Best non-tabu move per candidate, kept for the random-lesson fallback.
  std::vector<std::optional<SelectedMove>> best_of(candidates.size());
  std::vector<double> best_score(candidates.size(), std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const LessonIndex l = candidates[i];
    const Placement current = s.placement(l);
    for (Period q : inst.placeable_starts(l)) {
      if (current == q) continue;
      SelectedMove cand;
      cand.move = generate_move(inst, s, l, q);
      cand.delta = eval.delta(s, cand.move);
      cand.penalty = ctx.penalty_active ? move_penalty(*ctx.memory, cand.move, ctx.current_cost) : 0.0;
      const bool tabu = is_tabu(*ctx.tabu, cand.move, ctx.iteration);
      const double score = static_cast<double>(cand.delta.total) + cand.penalty;
      if (ctx.current_cost + cand.delta.total < ctx.best_cost) {
        cand.aspiration = tabu;
        return cand;
      }
      if (tabu) continue;
      if (score < 0.0) return cand;
      if (score < best_score[i]) {
        best_score[i] = score;
        best_of[i] = std::move(cand);
      }
    }
  }

  std::vector<std::size_t> pool(candidates.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  while (!pool.empty()) {
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
    const std::size_t i = pool[pick];
    if (best_of[i]) {
      best_of[i]->fallback = true;
      return std::move(best_of[i]);
    }
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return std::nullopt;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iteration,current_total,best_total,move_type,penalty_active,f1,f2,f3,f4,f5\n";
  for (const auto& r : trace) {
    out << r.iteration << ',' << r.current_total << ',' << r.best_total << ',' << to_string(r.move_type)
        << ',' << (r.penalty_active ? 1 : 0) << ',' << r.current.f1 << ',' << r.current.f2 << ','
        << r.current.f3 << ',' << r.current.f4 << ',' << r.current.f5 << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

TabuSearch::TabuSearch(const Instance& inst, SolverConfig cfg) : inst_(&inst), cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.weights && *cfg_.weights != inst.weights()) {
    reweighted_.emplace(inst.with_weights(*cfg_.weights));
    inst_ = &*reweighted_;
  }
}

SearchResult TabuSearch::run(const ScheduleState& s0) {
  const Instance& inst = *inst_;
  if (!audit_hard(inst, s0).clean() || check_consistency(inst, s0)) {
    throw std::invalid_argument("initial schedule is not hard-feasible");
  }
  const int n = inst.lesson_count();
  const int p = inst.periods();

  ScheduleState s = s0;
  CostBreakdown current = total_cost(inst, s);
  SearchResult result{s, current, current, {}};
  result.trace.reserve(cfg_.iterations);

  DeltaEvaluator eval(inst);
  TabuList tabu(n, p);
  TransitionMemory memory(n, p);
  Rng rng(cfg_.seed);
  int no_improvement = 0;
  int intra_depth = 0;

  for (int it = 1; it <= cfg_.iterations; ++it) {
    if (no_improvement > 0 && no_improvement % cfg_.intra_activation == 0) ++intra_depth;
    const bool intra_window = uses_intra(cfg_.variant) && no_improvement >= cfg_.intra_activation &&
                              no_improvement % cfg_.intra_activation < intra_depth;
    const bool penalty_active = uses_diversification(cfg_.variant) &&
                                no_improvement >= cfg_.div_activation &&
                                no_improvement % cfg_.div_activation < cfg_.iterations_div;

    MoveType type = intra_window ? MoveType::intra : MoveType::out_in;
    auto candidates = candidate_lessons(inst, s, type);
    if (candidates.empty()) {
      type = type == MoveType::intra ? MoveType::out_in : MoveType::intra;
      candidates = candidate_lessons(inst, s, type);
    }

    SelectionContext ctx{&tabu, &memory, it, penalty_active, current.total, result.best_cost.total};
    std::optional<SelectedMove> chosen;
    if (!candidates.empty()) chosen = select_move(inst, s, eval, candidates, ctx, rng);

    int tenure = 0;
    bool improved = false;
    if (chosen) {
      apply_move(inst, s, chosen->move);
      current += chosen->delta;
      tenure = tenure_sample(n, rng);
      for (const auto& a : chosen->move.atoms) {
        if (a.dir == Direction::out) {
          tabu.add(a.lesson, a.period, it + tenure + 1);
        } else {
          memory.record(a.lesson, a.period);
        }
      }
      if (current.total < result.best_cost.total) {
        result.best = s;
        result.best_cost = current;
        no_improvement = 0;
        intra_depth = 0;
        memory.clear();
        improved = true;
      }
    }
    if (!improved) ++no_improvement;

    result.trace.push_back({it, current.total, result.best_cost.total, type, penalty_active, current});
    if (observer_) {
      IterationView view{it,           &s,           &tabu,           &memory, &chosen,
                         tenure,       intra_depth,  no_improvement,  improved, type,
                         penalty_active, current};
      observer_(view);
    }
  }
  return result;
}

}  // namespace hstt
