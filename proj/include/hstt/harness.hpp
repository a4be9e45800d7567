#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hstt/block_detector.hpp"
#include "hstt/evaluator.hpp"
#include "hstt/instance.hpp"
#include "hstt/schedule.hpp"
#include "hstt/tabu.hpp"

namespace hstt {

/// (initial - final) / initial in percent; 0 when the initial cost is 0.
double improvement_percent(std::int64_t initial, std::int64_t final_cost);

/// Phase 1 of a run: block detection and greedy construction.
struct Prepared {
  Instance instance;  // with detected blocks substituted
  std::vector<BlockPath> blocks;
  ScheduleState initial;
};

Prepared prepare(const Instance& raw);

struct RunReport {
  std::string instance_name;
  Variant variant = Variant::tsdi;
  std::uint64_t seed = 0;
  int iterations = 0;
  int lessons = 0;  // after block substitution
  int blocks = 0;
  CostBreakdown initial;
  CostBreakdown final_cost;
  double improvement = 0.0;
  double wall_seconds = 0.0;
  std::vector<TraceRow> trace;

  /// Everything except wall time, so reruns compare byte for byte.
  std::string to_json() const;
};

struct SolveOutcome {
  RunReport report;
  ScheduleState best;
};

/// Runs phase 2 from an already prepared instance. Thread-safe for a shared `prep`.
SolveOutcome solve_prepared(const Prepared& prep, const SolverConfig& cfg, const std::string& name);

/// Detected blocks (kind, member session ids, classes, teachers) and, per
/// planted kind, planted versus detected hours and blocks.
std::string detection_report_json(const Instance& raw, const DetectionResult& res);

/// Lesson id -> start period (-1 when unscheduled), in lesson order.
std::string schedule_json(const Instance& inst, const ScheduleState& s);
/// Throws InstanceError when an id is unknown or a lesson is missing.
std::vector<Placement> parse_schedule(const Instance& inst, std::string_view text);

/// Rows are classes (or teachers), columns periods; cells hold the lesson id.
std::string class_grid_csv(const Instance& inst, const ScheduleState& s);
std::string teacher_grid_csv(const Instance& inst, const ScheduleState& s);

/// Loads the instance, solves, and writes instance.blocked.json, schedule.json,
/// class_grid.csv, teacher_grid.csv, trace.csv, report.json and timing.json into out_dir.
RunReport run_solve(const std::string& instance_path, const SolverConfig& cfg, const std::string& out_dir);

struct Evaluation {
  Instance instance;  // the instance the schedule was matched against
  bool blocks_applied = false;
  HardViolationReport hard;
  CostBreakdown cost;
};

/// Scores a schedule export. When its ids do not match the raw instance, the
/// instance is block-detected first (exports name composite lessons).
Evaluation evaluate_schedule(const Instance& raw, std::string_view schedule_text);

struct SummaryRow {
  std::string instance_name;
  Variant variant = Variant::tsdi;
  int runs = 0;
  std::int64_t initial_sum = 0;
  std::int64_t final_sum = 0;
  double improvement_sum = 0.0;

  double mean_initial() const { return runs ? static_cast<double>(initial_sum) / runs : 0.0; }
  double mean_final() const { return runs ? static_cast<double>(final_sum) / runs : 0.0; }
  double mean_improvement() const { return runs ? improvement_sum / runs : 0.0; }
};

struct ExperimentResult {
  std::vector<RunReport> reports;  // instance-major, then variant, then seed
  std::vector<SummaryRow> summary; // instance-major, then variant
};

struct ExperimentOptions {
  SolverConfig base;  // variant and seed are overwritten per run
  int jobs = 1;
  std::string out_dir;  // empty: nothing written
};

/// Every (instance, variant, seed) combination; runs execute on `jobs` worker
/// threads, aggregation happens after all of them finish.
ExperimentResult run_experiment(const std::vector<std::string>& instance_paths,
                                const std::vector<std::uint64_t>& seeds, const std::vector<Variant>& variants,
                                const ExperimentOptions& opts);

/// Same, for instances already in memory, named by `names`.
ExperimentResult run_experiment(const std::vector<Instance>& instances, const std::vector<std::string>& names,
                                const std::vector<std::uint64_t>& seeds, const std::vector<Variant>& variants,
                                const ExperimentOptions& opts);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string summary_text(const std::vector<SummaryRow>& rows);

}  // namespace hstt
