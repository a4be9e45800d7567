#pragma once

#include <map>
#include <vector>

#include "hstt/instance.hpp"

namespace hstt {

/// One or two one-hour sessions of the same class that would share a period,
/// each session taking one half of it.
struct SessionNode {
  ClassIndex klass = 0;
  std::vector<LessonIndex> sessions;  // 1 or 2, ascending
  std::vector<TeacherIndex> teachers; // sorted, distinct

  bool paired() const { return sessions.size() == 2; }
};

/// Session graph: nodes in deterministic order (paired nodes by class then
/// session index, followed by singletons), edges between nodes sharing a teacher.
struct BlockGraph {
  std::vector<SessionNode> nodes;
  std::vector<std::vector<int>> adjacency;  // ascending neighbour ids
};

struct BlockPath {
  LessonKind kind = LessonKind::half_switch;
  std::vector<int> nodes;            // path order; cyclic for half loops
  std::vector<LessonIndex> members;  // sessions, ascending
  Lesson block;                      // composite lesson (duration 1)
};

struct DetectorOptions {
  int max_cycle_length = 8;
  int max_chain_length = 8;  // nodes, endpoints included
};

/// Candidate sessions: duration-1 simple lessons. Sessions of one class are
/// paired greedily by structural affinity; a pair needs distinct teachers sharing
/// an available period with the class. Unpaired sessions become singletons.
BlockGraph build_session_graph(const Instance& inst);

std::vector<BlockPath> find_half_switches(const Instance& inst, const BlockGraph& g,
                                          std::vector<bool>& used);
std::vector<BlockPath> find_half_loops(const Instance& inst, const BlockGraph& g,
                                       std::vector<bool>& used, const DetectorOptions& opts = {});
std::vector<BlockPath> find_half_chains(const Instance& inst, const BlockGraph& g,
                                        std::vector<bool>& used, const DetectorOptions& opts = {});

/// True when the sessions of `nodes` can be split into a first and a second half
/// with no teacher and no class appearing twice in one half, and both sessions of
/// a paired node landing in different halves.
bool admits_half_assignment(const Instance& inst, const BlockGraph& g, const std::vector<int>& nodes);

struct DetectionResult {
  Instance instance;  // blocks substituted for their member sessions
  std::vector<BlockPath> blocks;
};

/// Half-switch, then half-loop, then half-chain detection; matched sessions are
/// replaced by one composite lesson per block, placed where the first member was.
DetectionResult detect_blocks(const Instance& inst, const DetectorOptions& opts = {});

/// Planted versus exactly recovered session-hours per block kind, for instances
/// carrying planted annotations.
struct DetectionSummary {
  struct Row {
    int planted_hours = 0;
    int detected_hours = 0;
    int planted_blocks = 0;
    int detected_blocks = 0;
  };
  std::map<LessonKind, Row> by_kind;
  int planted_hours() const;
  int detected_hours() const;
};

DetectionSummary summarize_detection(const Instance& original, const std::vector<BlockPath>& blocks);

/// Duration x tuple-count summed over lessons; preserved by detect_blocks.
int session_hour_mass(const Instance& inst);

}  // namespace hstt
