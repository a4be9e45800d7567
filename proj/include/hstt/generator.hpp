#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hstt/instance.hpp"

namespace hstt {

/// Raised when a generator spec asks for more demand than the calendar supplies,
/// or for a sparseness the availability thinning cannot reach.
class UnsatisfiableSpec : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlantedCounts {
  int half_switch = 0;
  int half_loop = 0;
  int half_chain = 0;
  int double_lesson = 0;
};

struct GenSpec {
  int classes = 9;
  int teachers = 24;
  int subjects = 12;
  int days = 4;
  int slots_per_day = 3;
  /// Period demand per class; a planted half-structure node counts one period.
  int lesson_hours_per_class = 10;
  double sparseness = 1.0;  // target sr in (0, 1]
  PlantedCounts planted;
  int loop_length = 3;      // nodes per planted half loop
  int declared_blocks = 0;  // curriculum half switches present in the input
  int max_chain_middles = 1;  // paired nodes per planted half chain, drawn in [1, max]
  double complex_fraction = 0.25;
  // Share of one-hour lessons among ordinary lessons (none in half-chain classes).
  double single_hour_share = 0.5;
  // Share of courses whose periods in the generator's hidden timetable survive
  // thinning. At 1.0 the instance always admits a complete timetable.
  double hidden_share = 1.0;
  // Lay the hidden timetable out without class gaps, without siblings on
  // adjacent days and without overloaded complex days.
  bool clean_hidden = false;
  std::uint64_t seed = 1;

  /// Throws UnsatisfiableSpec on structural problems (non-positive counts,
  /// sr outside (0, 1], demand above classes x periods).
  void validate() const;
};

GenSpec parse_gen_spec(std::string_view json_text);
std::string serialize_gen_spec(const GenSpec& spec);

/// sr = #a / (#lessons x p).
double compute_sparseness(std::int64_t available_pairs, std::int64_t lesson_count, int periods);
double sparseness(const Instance& inst);

/// Sparseness tolerance the generator guarantees around the requested ratio.
inline constexpr double kSparsenessTolerance = 0.03;

/// Deterministic for a given spec (seed included). Planted half structures use
/// block-exclusive teachers and keep a common available anchor period, so the
/// block detector's pairing and feasibility preconditions hold.
Instance generate_instance(const GenSpec& spec);

}  // namespace hstt
