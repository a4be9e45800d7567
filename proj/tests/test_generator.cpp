#include <cmath>

#include "doctest.h"
#include "hstt/block_detector.hpp"
#include "hstt/generator.hpp"

using namespace hstt;

namespace {

GenSpec de_shape() {
  GenSpec s;
  s.classes = 9;
  s.teachers = 24;
  s.subjects = 10;
  s.days = 4;
  s.slots_per_day = 3;
  s.lesson_hours_per_class = 9;
  s.sparseness = 0.32;
  s.planted = {1, 0, 1, 2};
  s.complex_fraction = 0.3;
  s.single_hour_share = 0.9;
  s.seed = 3;
  return s;
}

}  // namespace

TEST_CASE("sparseness arithmetic") {
  CHECK(std::abs(compute_sparseness(1046, 171, 18) - 0.34) <= 0.005);
  CHECK(compute_sparseness(0, 171, 18) == 0.0);
  CHECK(compute_sparseness(10, 0, 18) == 0.0);
}

TEST_CASE("DE-shaped spec gives a valid instance near the requested sparseness") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GenSpec spec = de_shape();
    spec.seed = seed;
    const Instance inst = generate_instance(spec);
    CHECK(inst.class_count() == 9);
    CHECK(inst.teacher_count() == 24);
    CHECK(inst.calendar() == Calendar{4, 3});
    CHECK(std::abs(sparseness(inst) - 0.32) <= kSparsenessTolerance);
    CHECK(inst.lesson_count() > 50);
    for (LessonIndex l = 0; l < inst.lesson_count(); ++l) CHECK_FALSE(inst.placeable_starts(l).empty());
  }
}

TEST_CASE("clean hidden layout still generates") {
  GenSpec spec = de_shape();
  spec.clean_hidden = true;
  const Instance inst = generate_instance(spec);
  CHECK(std::abs(sparseness(inst) - 0.32) <= kSparsenessTolerance);
}

TEST_CASE("generation is deterministic per seed") {
  const GenSpec spec = de_shape();
  CHECK(serialize_instance(generate_instance(spec)) == serialize_instance(generate_instance(spec)));
  GenSpec other = spec;
  other.seed = spec.seed + 1;
  CHECK(serialize_instance(generate_instance(spec)) != serialize_instance(generate_instance(other)));
}

TEST_CASE("spec round trip and validation") {
  GenSpec spec = de_shape();
  spec.declared_blocks = 2;
  spec.clean_hidden = true;
  const GenSpec back = parse_gen_spec(serialize_gen_spec(spec));
  CHECK(serialize_gen_spec(back) == serialize_gen_spec(spec));
  CHECK(back.planted.half_chain == 1);
  CHECK(back.clean_hidden);

  CHECK_THROWS_AS(parse_gen_spec("{\"classes\": 3,,}"), InstanceError);
  GenSpec bad = de_shape();
  bad.lesson_hours_per_class = 13;  // 12 periods
  CHECK_THROWS_AS(generate_instance(bad), UnsatisfiableSpec);
  bad = de_shape();
  bad.sparseness = 0.0;
  CHECK_THROWS_AS(generate_instance(bad), UnsatisfiableSpec);
  bad = de_shape();
  bad.planted.half_switch = 40;
  CHECK_THROWS_AS(generate_instance(bad), UnsatisfiableSpec);
  bad = de_shape();
  bad.sparseness = 0.05;  // below what the teaching load allows
  CHECK_THROWS_AS(generate_instance(bad), UnsatisfiableSpec);
}

TEST_CASE("ten planted half switches survive the detector") {
  GenSpec spec;
  spec.classes = 20;
  spec.teachers = 60;
  spec.subjects = 12;
  spec.days = 5;
  spec.slots_per_day = 4;
  spec.lesson_hours_per_class = 14;
  spec.sparseness = 1.0;
  spec.planted = {10, 0, 0, 0};
  spec.seed = 12;
  const Instance inst = generate_instance(spec);
  const auto sum = summarize_detection(inst, detect_blocks(inst).blocks);
  const auto& row = sum.by_kind.at(LessonKind::half_switch);
  CHECK(row.planted_blocks == 10);
  CHECK(row.detected_blocks >= 9);
}

TEST_CASE("planted annotations") {
  GenSpec spec = de_shape();
  spec.planted = {2, 0, 1, 3};
  const Instance inst = generate_instance(spec);
  int switch_sessions = 0, doubles = 0, chain_edges = 0;
  for (const auto& l : inst.lessons()) {
    if (!l.planted) continue;
    switch (l.planted->kind) {
      case LessonKind::half_switch: ++switch_sessions; break;
      case LessonKind::double_lesson:
        ++doubles;
        CHECK(l.duration == 2);
        break;
      case LessonKind::half_chain: ++chain_edges; break;
      default: break;
    }
  }
  CHECK(switch_sessions == 8);
  CHECK(doubles == 3);
  CHECK(chain_edges >= 4);
}
