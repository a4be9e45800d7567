#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "hstt/evaluator.hpp"
#include "hstt/instance.hpp"
#include "hstt/schedule.hpp"

namespace hstt {

using Rng = std::mt19937_64;

enum class Variant { ts, tsi, tsd, tsdi };
enum class MoveType { out_in, intra };

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view text);
std::string_view to_string(MoveType t);

inline bool uses_intra(Variant v) { return v == Variant::tsi || v == Variant::tsdi; }
inline bool uses_diversification(Variant v) { return v == Variant::tsd || v == Variant::tsdi; }

struct SolverConfig {
  int iterations = 3000;
  int div_activation = 20;
  int iterations_div = 5;
  int intra_activation = 40;
  Variant variant = Variant::tsdi;
  std::uint64_t seed = 1;
  std::optional<Weights> weights;  // overrides the instance weights when set

  /// Throws std::invalid_argument unless counts are positive and
  /// iterations_div < div_activation.
  void validate() const;
};

/// (lesson, period) -> expiry iteration. An entry is active while iter < expiry.
class TabuList {
 public:
  TabuList() = default;
  TabuList(int lessons, int periods);

  void add(LessonIndex l, Period q, int expiry);
  bool active(LessonIndex l, Period q, int iter) const { return expiry_[l * periods_ + q] > iter; }
  int expiry(LessonIndex l, Period q) const { return expiry_[l * periods_ + q]; }

 private:
  int periods_ = 0;
  std::vector<int> expiry_;
};

/// Frequency matrix Z of (lesson, period) insertions with its running maximum.
class TransitionMemory {
 public:
  TransitionMemory() = default;
  TransitionMemory(int lessons, int periods);

  void record(LessonIndex l, Period q);
  void clear();
  int count(LessonIndex l, Period q) const { return z_[l * periods_ + q]; }
  int max() const { return max_; }
  bool all_zero() const;

 private:
  int periods_ = 0;
  std::vector<int> z_;
  int max_ = 0;
};

/// Step 1 places l at q (ejecting from q's span whatever shares a teacher or
/// class with l), step 3 re-inserts each ejected lesson at its first conflict-free
/// placeable period. s is used as scratch and restored before returning.
/// Throws std::invalid_argument if q is not a placeable start for l.
Move generate_move(const Instance& inst, ScheduleState& s, LessonIndex l, Period q);

/// Out-In candidates are U(s), intra candidates the scheduled lessons; both sorted
/// by feasible-period count, then lesson index.
std::vector<LessonIndex> candidate_lessons(const Instance& inst, const ScheduleState& s, MoveType type);

bool is_tabu(const TabuList& tl, const Move& m, int iter);

std::pair<int, int> tenure_range(int lesson_count);
int tenure_sample(int lesson_count, Rng& rng);

/// Mean insertion-frequency ratio over the move's atoms, scaled by the current
/// cost. Out-atoms contribute zero; the result is zero while the memory is empty.
double move_penalty(const TransitionMemory& mem, const Move& m, std::int64_t current_cost);

struct SelectedMove {
  Move move;
  CostBreakdown delta;
  double penalty = 0.0;
  bool aspiration = false;  // tabu, accepted because it beats the best cost
  bool fallback = false;    // no improving move; chosen from a random lesson
};

struct SelectionContext {
  const TabuList* tabu = nullptr;
  const TransitionMemory* memory = nullptr;
  int iteration = 0;
  bool penalty_active = false;
  std::int64_t current_cost = 0;
  std::int64_t best_cost = 0;
};

/// First improving admissible move in candidate order, or the best non-tabu move
/// of a random candidate lesson when nothing improves. nullopt when no candidate
/// has any legal move.
std::optional<SelectedMove> select_move(const Instance& inst, ScheduleState& s, DeltaEvaluator& eval,
                                        const std::vector<LessonIndex>& candidates,
                                        const SelectionContext& ctx, Rng& rng);

struct TraceRow {
  int iteration = 0;
  std::int64_t current_total = 0;
  std::int64_t best_total = 0;
  MoveType move_type = MoveType::out_in;
  bool penalty_active = false;
  CostBreakdown current;
};

std::string trace_csv(const std::vector<TraceRow>& trace);

/// Read-only view handed to observers after every iteration.
struct IterationView {
  int iteration = 0;
  const ScheduleState* state = nullptr;
  const TabuList* tabu = nullptr;
  const TransitionMemory* memory = nullptr;
  const std::optional<SelectedMove>* applied = nullptr;
  int tenure = 0;
  int intra_depth = 0;
  int no_improvement = 0;
  bool improved_best = false;
  MoveType move_type = MoveType::out_in;
  bool penalty_active = false;
  CostBreakdown current;
};

struct SearchResult {
  ScheduleState best;
  CostBreakdown initial;
  CostBreakdown best_cost;
  std::vector<TraceRow> trace;
};

class TabuSearch {
 public:
  /// `inst` must outlive the search. When cfg.weights is set the search scores a
  /// reweighted copy of the instance.
  TabuSearch(const Instance& inst, SolverConfig cfg);
  TabuSearch(const TabuSearch&) = delete;
  TabuSearch& operator=(const TabuSearch&) = delete;

  const Instance& instance() const { return *inst_; }

  void set_observer(std::function<void(const IterationView&)> fn) { observer_ = std::move(fn); }

  /// Throws std::invalid_argument when s0 violates a hard constraint.
  SearchResult run(const ScheduleState& s0);

 private:
  std::optional<Instance> reweighted_;
  const Instance* inst_;
  SolverConfig cfg_;
  std::function<void(const IterationView&)> observer_;
};

}  // namespace hstt
