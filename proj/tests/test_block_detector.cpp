#include <algorithm>
#include <set>

#include "doctest.h"
#include "hstt/block_detector.hpp"
#include "hstt/generator.hpp"
#include "support.hpp"

using namespace hstt;
using testing::Builder;

namespace {

// Language/Geography swap between two classes.
Instance switch_fixture() {
  return Builder(2, 3)
      .teacher("lang")
      .teacher("geo")
      .klass("c1")
      .klass("c2")
      .subject("L")
      .subject("G")
      .lesson("c1-lang", {{"lang", "c1", "L"}})
      .lesson("c1-geo", {{"geo", "c1", "G"}})
      .lesson("c2-geo", {{"geo", "c2", "G"}})
      .lesson("c2-lang", {{"lang", "c2", "L"}})
      .build();
}

// Three classes, three teachers taught pairwise.
Instance loop_fixture() {
  return Builder(2, 3)
      .teacher("lang")
      .teacher("geo")
      .teacher("art")
      .klass("c1")
      .klass("c2")
      .klass("c3")
      .subject("L")
      .subject("G")
      .subject("A")
      .lesson("c1-lang", {{"lang", "c1", "L"}})
      .lesson("c1-geo", {{"geo", "c1", "G"}})
      .lesson("c2-geo", {{"geo", "c2", "G"}})
      .lesson("c2-art", {{"art", "c2", "A"}})
      .lesson("c3-art", {{"art", "c3", "A"}})
      .lesson("c3-lang", {{"lang", "c3", "L"}})
      .build();
}

// Singleton, paired node, singleton; geo and art each teach one endpoint.
Instance chain_fixture() {
  return Builder(2, 3)
      .teacher("geo")
      .teacher("art")
      .klass("c1")
      .klass("c2")
      .klass("c3")
      .subject("G")
      .subject("A")
      .lesson("c1-geo", {{"geo", "c1", "G"}})
      .lesson("c2-geo", {{"geo", "c2", "G"}})
      .lesson("c2-art", {{"art", "c2", "A"}})
      .lesson("c3-art", {{"art", "c3", "A"}})
      .build();
}

// Brute force over every split of the sessions into two halves.
bool brute_force_halves(const Instance& inst, const BlockGraph& g, const std::vector<int>& nodes) {
  std::vector<std::pair<LessonIndex, int>> items;
  for (int n : nodes) {
    for (LessonIndex s : g.nodes[n].sessions) items.push_back({s, n});
  }
  const int k = static_cast<int>(items.size());
  for (int mask = 0; mask < (1 << k); ++mask) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      for (int j = i + 1; j < k && ok; ++j) {
        if (((mask >> i) & 1) != ((mask >> j) & 1)) continue;
        const auto& a = inst.lesson(items[i].first).tuples.front();
        const auto& b = inst.lesson(items[j].first).tuples.front();
        if (items[i].second == items[j].second || a.teacher == b.teacher || a.klass == b.klass) ok = false;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("two classes swapping two teachers form one half switch") {
  const Instance inst = switch_fixture();
  const BlockGraph g = build_session_graph(inst);
  REQUIRE(g.nodes.size() == 2);
  CHECK(g.nodes[0].paired());
  CHECK(g.nodes[1].paired());
  const DetectionResult res = detect_blocks(inst);
  REQUIRE(res.blocks.size() == 1);
  CHECK(res.blocks[0].kind == LessonKind::half_switch);
  CHECK(res.blocks[0].block.tuples.size() == 4);
  CHECK(res.instance.lesson_count() == 1);
  CHECK(res.instance.lesson(0).kind == LessonKind::half_switch);
  CHECK(res.instance.lesson(0).courses.size() == 4);
}

TEST_CASE("pairwise teaching of three classes forms a three-node loop") {
  const Instance inst = loop_fixture();
  const BlockGraph g = build_session_graph(inst);
  REQUIRE(g.nodes.size() == 3);
  int edges = 0;
  for (const auto& adj : g.adjacency) edges += static_cast<int>(adj.size());
  CHECK(edges / 2 == 3);
  std::vector<bool> used(g.nodes.size(), false);
  CHECK(find_half_switches(inst, g, used).empty());
  const auto loops = find_half_loops(inst, g, used);
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].nodes.size() == 3);
  const DetectionResult res = detect_blocks(inst);
  REQUIRE(res.blocks.size() == 1);
  CHECK(res.blocks[0].kind == LessonKind::half_loop);
  CHECK(res.instance.lesson_count() == 1);
}

TEST_CASE("singleton, pair, singleton forms a half chain at a day edge") {
  const Instance inst = chain_fixture();
  const DetectionResult res = detect_blocks(inst);
  REQUIRE(res.blocks.size() == 1);
  CHECK(res.blocks[0].kind == LessonKind::half_chain);
  CHECK(res.blocks[0].nodes.size() == 3);
  const Lesson& block = res.instance.lesson(0);
  CHECK(block.edge_preference);
  for (Period q : res.instance.placeable_starts(0)) CHECK((q % 3 == 0 || q % 3 == 2));
}

TEST_CASE("chain needs a commonly available edge slot") {
  // every edge slot is blocked for one of the classes
  const Instance inst = Builder(1, 3)
                            .teacher("geo")
                            .teacher("art")
                            .klass("c1", {0})
                            .klass("c2")
                            .klass("c3", {2})
                            .subject("G")
                            .subject("A")
                            .lesson("c1-geo", {{"geo", "c1", "G"}})
                            .lesson("c2-geo", {{"geo", "c2", "G"}})
                            .lesson("c2-art", {{"art", "c2", "A"}})
                            .lesson("c3-art", {{"art", "c3", "A"}})
                            .build();
  CHECK(detect_blocks(inst).blocks.empty());
}

TEST_CASE("a teacher in two non-consecutive nodes rejects the path") {
  // math would have to teach c1 and c3 in the same half
  const Instance inst = Builder(2, 3)
                            .teacher("math")
                            .teacher("bio")
                            .klass("c1")
                            .klass("c2")
                            .klass("c3")
                            .subject("M")
                            .subject("B")
                            .lesson("c1-math", {{"math", "c1", "M"}})
                            .lesson("c2-math", {{"math", "c2", "M"}})
                            .lesson("c2-bio", {{"bio", "c2", "B"}})
                            .lesson("c3-bio", {{"bio", "c3", "B"}})
                            .lesson("c3-math", {{"math", "c3", "M"}})
                            .build();
  const BlockGraph g = build_session_graph(inst);
  std::vector<int> all(g.nodes.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  CHECK_FALSE(admits_half_assignment(inst, g, all));
  for (const auto& b : detect_blocks(inst).blocks) {
    // whatever is found must not combine all three math sessions
    int math = 0;
    for (const auto& tu : b.block.tuples) math += inst.teachers()[tu.teacher].id == "math";
    CHECK(math <= 2);
  }
}

TEST_CASE("instance without one-hour sessions is returned unchanged") {
  const Instance inst = Builder(2, 3)
                            .teacher("t")
                            .teacher("u")
                            .klass("c1")
                            .klass("c2")
                            .subject("s")
                            .lesson("a", {{"t", "c1", "s"}}, 2)
                            .lesson("b", {{"u", "c1", "s"}}, 2)
                            .lesson("c", {{"t", "c2", "s"}}, 2)
                            .lesson("d", {{"u", "c2", "s"}}, 2)
                            .build();
  const DetectionResult res = detect_blocks(inst);
  CHECK(res.blocks.empty());
  CHECK(res.instance == inst);
}

TEST_CASE("half assignment agrees with brute force on random node sets") {
  testing::TestRng rng(71);
  int positive = 0, negative = 0;
  for (int round = 0; round < 200; ++round) {
    const Instance inst = testing::random_instance(rng, 20);
    const BlockGraph g = build_session_graph(inst);
    const int n = static_cast<int>(g.nodes.size());
    if (n < 2) continue;
    for (int k = 0; k < 10; ++k) {
      std::vector<int> nodes;
      const int size = std::uniform_int_distribution<int>(2, std::min(4, n))(rng);
      while (static_cast<int>(nodes.size()) < size) {
        const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
      }
      const bool expected = brute_force_halves(inst, g, nodes);
      CHECK(admits_half_assignment(inst, g, nodes) == expected);
      (expected ? positive : negative) += 1;
    }
  }
  CHECK(positive > 0);
  CHECK(negative > 0);
}

TEST_CASE("detected blocks are disjoint and conserve session hours") {
  testing::TestRng rng(72);
  for (int round = 0; round < 100; ++round) {
    const Instance inst = testing::random_instance(rng, 20);
    const DetectionResult res = detect_blocks(inst);
    std::set<LessonIndex> seen;
    int removed = 0;
    for (const auto& b : res.blocks) {
      for (LessonIndex m : b.members) CHECK(seen.insert(m).second);
      removed += static_cast<int>(b.members.size()) - 1;
      CHECK(b.block.duration == 1);
    }
    CHECK(session_hour_mass(res.instance) == session_hour_mass(inst));
    CHECK(res.instance.lesson_count() == inst.lesson_count() - removed);
  }
}

TEST_CASE("switches take precedence over loops and chains") {
  testing::TestRng rng(73);
  for (int round = 0; round < 100; ++round) {
    const Instance inst = testing::random_instance(rng, 20);
    const BlockGraph g = build_session_graph(inst);
    std::vector<bool> used(g.nodes.size(), false);
    const auto switches = find_half_switches(inst, g, used);
    const DetectionResult res = detect_blocks(inst);
    REQUIRE(res.blocks.size() >= switches.size());
    for (std::size_t i = 0; i < switches.size(); ++i) {
      CHECK(res.blocks[i].kind == LessonKind::half_switch);
      CHECK(res.blocks[i].members == switches[i].members);
    }
    for (std::size_t i = switches.size(); i < res.blocks.size(); ++i) {
      CHECK(res.blocks[i].kind != LessonKind::half_switch);
    }
  }
}

TEST_CASE("detection is deterministic") {
  GenSpec spec;
  spec.planted = {4, 1, 1, 0};
  spec.classes = 10;
  spec.teachers = 30;
  spec.days = 5;
  spec.slots_per_day = 4;
  spec.lesson_hours_per_class = 14;
  spec.sparseness = 0.5;
  spec.seed = 5;
  const Instance inst = generate_instance(spec);
  const DetectionResult a = detect_blocks(inst);
  const DetectionResult b = detect_blocks(inst);
  CHECK(a.instance == b.instance);
  REQUIRE(a.blocks.size() == b.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) CHECK(a.blocks[i].members == b.blocks[i].members);
}

TEST_CASE("planted summary counts exact recoveries") {
  GenSpec spec;
  spec.classes = 10;
  spec.teachers = 32;
  spec.days = 5;
  spec.slots_per_day = 4;
  spec.lesson_hours_per_class = 14;
  spec.sparseness = 0.5;
  spec.planted = {3, 1, 1, 2};
  spec.seed = 8;
  const Instance inst = generate_instance(spec);
  const DetectionResult res = detect_blocks(inst);
  const DetectionSummary sum = summarize_detection(inst, res.blocks);
  CHECK(sum.by_kind.at(LessonKind::half_switch).planted_hours == 12);
  CHECK(sum.by_kind.at(LessonKind::half_switch).planted_blocks == 3);
  CHECK(sum.by_kind.at(LessonKind::half_loop).planted_hours == 6);
  CHECK(sum.detected_hours() <= sum.planted_hours());
  CHECK(sum.by_kind.count(LessonKind::double_lesson) == 0);
  // dropping every block drops every detection
  CHECK(summarize_detection(inst, {}).detected_hours() == 0);
}
