#include <filesystem>

#include "doctest.h"
#include "hstt/generator.hpp"
#include "hstt/harness.hpp"

using namespace hstt;

namespace {

Instance small_instance(std::uint64_t seed) {
  GenSpec spec;
  spec.classes = 5;
  spec.teachers = 14;
  spec.subjects = 6;
  spec.days = 4;
  spec.slots_per_day = 3;
  spec.lesson_hours_per_class = 9;
  spec.sparseness = 0.45;
  spec.planted = {1, 0, 0, 1};
  spec.seed = seed;
  return generate_instance(spec);
}

}  // namespace

TEST_CASE("improvement percent") {
  CHECK(improvement_percent(1000, 250) == doctest::Approx(75.0));
  CHECK(improvement_percent(0, 0) == 0.0);
  CHECK(improvement_percent(500, 500) == 0.0);
}

TEST_CASE("zero iterations echo the initial cost") {
  const Prepared prep = prepare(small_instance(1));
  SolverConfig cfg;
  cfg.iterations = 0;
  const SolveOutcome out = solve_prepared(prep, cfg, "x");
  CHECK(out.report.final_cost == out.report.initial);
  CHECK(out.report.improvement == 0.0);
  CHECK(out.best == prep.initial);
}

TEST_CASE("schedule export round trip through evaluate") {
  const Instance raw = small_instance(2);
  const Prepared prep = prepare(raw);
  SolverConfig cfg;
  cfg.iterations = 200;
  const SolveOutcome out = solve_prepared(prep, cfg, "x");
  const std::string text = schedule_json(prep.instance, out.best);
  CHECK(parse_schedule(prep.instance, text) ==
        std::vector<Placement>(out.best.assignment().begin(), out.best.assignment().end()));

  const Evaluation ev = evaluate_schedule(raw, text);
  CHECK(ev.blocks_applied == !prep.blocks.empty());
  CHECK(ev.hard.clean());
  CHECK(ev.cost == out.report.final_cost);

  CHECK_THROWS_AS(parse_schedule(prep.instance, "{\"nope\": 1}"), InstanceError);
  CHECK_THROWS_AS(parse_schedule(prep.instance, "{}"), InstanceError);
}

TEST_CASE("grids name every placed lesson") {
  const Prepared prep = prepare(small_instance(3));
  const std::string grid = class_grid_csv(prep.instance, prep.initial);
  CHECK(grid.rfind("class,d1s1,d1s2,d1s3,d2s1", 0) == 0);
  for (LessonIndex l = 0; l < prep.instance.lesson_count(); ++l) {
    if (prep.initial.scheduled(l)) CHECK(grid.find(prep.instance.lesson(l).id) != std::string::npos);
  }
  CHECK(teacher_grid_csv(prep.instance, prep.initial).rfind("teacher,", 0) == 0);
}

TEST_CASE("experiment aggregates in order and does not depend on thread count") {
  const std::vector<Instance> instances{small_instance(4), small_instance(5)};
  const std::vector<std::string> names{"a", "b"};
  ExperimentOptions one;
  one.base.iterations = 100;
  one.jobs = 1;
  ExperimentOptions two = one;
  two.jobs = 2;
  const std::vector<Variant> variants{Variant::ts, Variant::tsdi};
  const auto r1 = run_experiment(instances, names, {1, 2, 3}, variants, one);
  const auto r2 = run_experiment(instances, names, {1, 2, 3}, variants, two);
  REQUIRE(r1.reports.size() == 12);
  for (std::size_t i = 0; i < r1.reports.size(); ++i) CHECK(r1.reports[i].to_json() == r2.reports[i].to_json());
  CHECK(summary_csv(r1.summary) == summary_csv(r2.summary));

  REQUIRE(r1.summary.size() == 4);
  CHECK(r1.summary[0].instance_name == "a");
  CHECK(r1.summary[0].variant == Variant::ts);
  CHECK(r1.summary[1].variant == Variant::tsdi);
  CHECK(r1.summary[2].instance_name == "b");
  std::int64_t final_sum = 0;
  for (int i = 0; i < 3; ++i) final_sum += r1.reports[i].final_cost.total;
  CHECK(r1.summary[0].runs == 3);
  CHECK(r1.summary[0].mean_final() == doctest::Approx(final_sum / 3.0));
}

TEST_CASE("run_solve writes its outputs") {
  const auto dir = std::filesystem::temp_directory_path() / "hstt_harness_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto inst_path = (dir / "inst.json").string();
  write_text_file(inst_path, serialize_instance(small_instance(6)));
  SolverConfig cfg;
  cfg.iterations = 50;
  const RunReport r = run_solve(inst_path, cfg, (dir / "out").string());
  for (const char* f : {"instance.blocked.json", "schedule.json", "class_grid.csv", "teacher_grid.csv", "trace.csv",
                        "report.json", "timing.json"}) {
    CHECK(std::filesystem::exists(dir / "out" / f));
  }
  CHECK(r.trace.size() == 50);
  std::filesystem::remove_all(dir);
}
