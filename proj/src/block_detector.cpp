#include "hstt/block_detector.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <tuple>

namespace hstt {

namespace {

bool is_candidate(const Lesson& l) {
  return l.duration == 1 && l.kind == LessonKind::simple && l.tuples.size() == 1;
}

bool share_period(const Instance& inst, const std::vector<TeacherIndex>& teachers,
                  const std::vector<ClassIndex>& classes, bool edge_only) {
  const int h = inst.calendar().slots_per_day;
  for (Period q = 0; q < inst.periods(); ++q) {
    if (edge_only && q % h != 0 && q % h != h - 1) continue;
    bool ok = true;
    for (TeacherIndex t : teachers) ok = ok && inst.teachers()[t].available[q];
    for (ClassIndex c : classes) ok = ok && inst.classes()[c].available[q];
    if (ok) return true;
  }
  return false;
}

// Teacher-class incidence over candidate sessions, used to score pairings.
struct Incidence {
  std::vector<std::set<ClassIndex>> classes_of_teacher;
  std::vector<std::set<TeacherIndex>> teachers_of_class;
};

// Whether teachers a and b are linked through candidate sessions of classes other than `skip`.
bool connected_without(const Incidence& inc, TeacherIndex a, TeacherIndex b, ClassIndex skip) {
  std::vector<bool> seen_t(inc.classes_of_teacher.size(), false);
  std::vector<bool> seen_c(inc.teachers_of_class.size(), false);
  std::deque<TeacherIndex> queue{a};
  seen_t[a] = true;
  seen_c[skip] = true;
  while (!queue.empty()) {
    const TeacherIndex t = queue.front();
    queue.pop_front();
    if (t == b) return true;
    for (ClassIndex c : inc.classes_of_teacher[t]) {
      if (seen_c[c]) continue;
      seen_c[c] = true;
      for (TeacherIndex u : inc.teachers_of_class[c]) {
        if (!seen_t[u]) {
          seen_t[u] = true;
          queue.push_back(u);
        }
      }
    }
  }
  return false;
}

std::vector<LessonIndex> members_of(const BlockGraph& g, const std::vector<int>& nodes) {
  std::vector<LessonIndex> m;
  for (int n : nodes) m.insert(m.end(), g.nodes[n].sessions.begin(), g.nodes[n].sessions.end());
  std::sort(m.begin(), m.end());
  return m;
}

Lesson make_block(const Instance& inst, const std::vector<LessonIndex>& members, LessonKind kind) {
  Lesson b;
  b.kind = kind;
  b.duration = 1;
  b.edge_preference = kind == LessonKind::half_chain;
  std::optional<PlantedTag> tag = inst.lesson(members.front()).planted;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Lesson& m = inst.lesson(members[i]);
    b.id += (i ? "+" : "") + m.id;
    b.tuples.insert(b.tuples.end(), m.tuples.begin(), m.tuples.end());
    b.courses.insert(b.courses.end(), m.courses.begin(), m.courses.end());
    if (m.planted != tag) tag.reset();
  }
  b.planted = tag;
  return b;
}

bool admissible(const Instance& inst, const BlockGraph& g, const std::vector<int>& nodes, bool edge_only) {
  if (!admits_half_assignment(inst, g, nodes)) return false;
  std::vector<TeacherIndex> teachers;
  std::vector<ClassIndex> classes;
  for (int n : nodes) {
    teachers.insert(teachers.end(), g.nodes[n].teachers.begin(), g.nodes[n].teachers.end());
    classes.push_back(g.nodes[n].klass);
  }
  return share_period(inst, teachers, classes, edge_only);
}

BlockPath emit(const Instance& inst, const BlockGraph& g, std::vector<int> nodes, LessonKind kind,
               std::vector<bool>& used) {
  for (int n : nodes) used[n] = true;
  BlockPath p;
  p.kind = kind;
  p.members = members_of(g, nodes);
  p.block = make_block(inst, p.members, kind);
  p.nodes = std::move(nodes);
  return p;
}

}  // namespace

BlockGraph build_session_graph(const Instance& inst) {
  const int nc = inst.class_count();
  std::vector<std::vector<LessonIndex>> by_class(nc);
  Incidence inc;
  inc.classes_of_teacher.resize(inst.teacher_count());
  inc.teachers_of_class.resize(nc);
  for (int l = 0; l < inst.lesson_count(); ++l) {
    const Lesson& les = inst.lesson(l);
    if (!is_candidate(les)) continue;
    const auto& tu = les.tuples.front();
    by_class[tu.klass].push_back(l);
    inc.classes_of_teacher[tu.teacher].insert(tu.klass);
    inc.teachers_of_class[tu.klass].insert(tu.teacher);
  }

  BlockGraph g;
  for (ClassIndex c = 0; c < nc; ++c) {
    const auto& sessions = by_class[c];
    struct Candidate {
      int score;
      LessonIndex a, b;
    };
    std::vector<Candidate> pairs;
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      for (std::size_t j = i + 1; j < sessions.size(); ++j) {
        const TeacherIndex ta = inst.lesson(sessions[i]).tuples.front().teacher;
        const TeacherIndex tb = inst.lesson(sessions[j]).tuples.front().teacher;
        if (ta == tb || !share_period(inst, {ta, tb}, {c}, false)) continue;
        int both_elsewhere = 0;
        for (ClassIndex o : inc.classes_of_teacher[ta]) {
          if (o != c && inc.classes_of_teacher[tb].count(o)) ++both_elsewhere;
        }
        const int a_out = inc.classes_of_teacher[ta].size() > 1 ? 1 : 0;
        const int b_out = inc.classes_of_teacher[tb].size() > 1 ? 1 : 0;
        const int linked = (a_out && b_out && connected_without(inc, ta, tb, c)) ? 1 : 0;
        pairs.push_back({both_elsewhere * 8 + linked * 4 + a_out + b_out, sessions[i], sessions[j]});
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Candidate& x, const Candidate& y) { return x.score > y.score; });
    std::set<LessonIndex> taken;
    std::vector<SessionNode> paired;
    for (const auto& p : pairs) {
      if (taken.count(p.a) || taken.count(p.b)) continue;
      taken.insert(p.a);
      taken.insert(p.b);
      SessionNode n;
      n.klass = c;
      n.sessions = {p.a, p.b};
      n.teachers = {inst.lesson(p.a).tuples.front().teacher, inst.lesson(p.b).tuples.front().teacher};
      std::sort(n.teachers.begin(), n.teachers.end());
      paired.push_back(std::move(n));
    }
    std::sort(paired.begin(), paired.end(),
              [](const SessionNode& x, const SessionNode& y) { return x.sessions < y.sessions; });
    for (auto& n : paired) g.nodes.push_back(std::move(n));
    for (LessonIndex s : sessions) {
      if (taken.count(s)) continue;
      g.nodes.push_back(SessionNode{c, {s}, {inst.lesson(s).tuples.front().teacher}});
    }
  }

  g.adjacency.assign(g.nodes.size(), {});
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      const auto& ti = g.nodes[i].teachers;
      const auto& tj = g.nodes[j].teachers;
      const bool share = std::any_of(ti.begin(), ti.end(), [&](TeacherIndex t) {
        return std::find(tj.begin(), tj.end(), t) != tj.end();
      });
      if (share) {
        g.adjacency[i].push_back(static_cast<int>(j));
        g.adjacency[j].push_back(static_cast<int>(i));
      }
    }
  }
  return g;
}

bool admits_half_assignment(const Instance& inst, const BlockGraph& g, const std::vector<int>& nodes) {
  struct Item {
    LessonIndex session;
    int node;
    TeacherIndex teacher;
    ClassIndex klass;
  };
  std::vector<Item> items;
  for (int n : nodes) {
    for (LessonIndex s : g.nodes[n].sessions) {
      const auto& tu = inst.lesson(s).tuples.front();
      items.push_back({s, n, tu.teacher, tu.klass});
    }
  }
  const int k = static_cast<int>(items.size());
  std::vector<std::vector<int>> differ(k);
  std::map<TeacherIndex, int> per_teacher;
  std::map<ClassIndex, int> per_class;
  for (int i = 0; i < k; ++i) {
    if (++per_teacher[items[i].teacher] > 2 || ++per_class[items[i].klass] > 2) return false;
    for (int j = i + 1; j < k; ++j) {
      if (items[i].session == items[j].session) return false;
      if (items[i].node == items[j].node || items[i].teacher == items[j].teacher ||
          items[i].klass == items[j].klass) {
        differ[i].push_back(j);
        differ[j].push_back(i);
      }
    }
  }
  std::vector<int> half(k, -1);
  for (int s = 0; s < k; ++s) {
    if (half[s] >= 0) continue;
    half[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      for (int j : differ[i]) {
        if (half[j] < 0) {
          half[j] = 1 - half[i];
          queue.push_back(j);
        } else if (half[j] == half[i]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<BlockPath> find_half_switches(const Instance& inst, const BlockGraph& g,
                                          std::vector<bool>& used) {
  std::vector<BlockPath> out;
  for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
    if (used[i] || !g.nodes[i].paired()) continue;
    for (int j : g.adjacency[i]) {
      if (j < i || used[j] || !g.nodes[j].paired()) continue;
      if (g.nodes[j].klass == g.nodes[i].klass || g.nodes[j].teachers != g.nodes[i].teachers) continue;
      if (!admissible(inst, g, {i, j}, false)) continue;
      out.push_back(emit(inst, g, {i, j}, LessonKind::half_switch, used));
      break;
    }
  }
  return out;
}

namespace {

// Depth-first path extension with teacher/class occupancy pruning shared by the
// loop and chain finders.
struct PathSearch {
  const Instance& inst;
  const BlockGraph& g;
  const std::vector<bool>& used;
  std::vector<int> path;
  std::vector<bool> on_path;
  std::map<TeacherIndex, int> teacher_load;
  std::map<ClassIndex, int> class_load;

  PathSearch(const Instance& i, const BlockGraph& gr, const std::vector<bool>& u)
      : inst(i), g(gr), used(u), on_path(gr.nodes.size(), false) {}

  bool push(int n) {
    const auto& node = g.nodes[n];
    for (TeacherIndex t : node.teachers) {
      if (teacher_load[t] + 1 > 2) return false;
    }
    if (class_load[node.klass] + static_cast<int>(node.sessions.size()) > 2) return false;
    for (TeacherIndex t : node.teachers) ++teacher_load[t];
    class_load[node.klass] += static_cast<int>(node.sessions.size());
    path.push_back(n);
    on_path[n] = true;
    return true;
  }

  void pop() {
    const int n = path.back();
    const auto& node = g.nodes[n];
    for (TeacherIndex t : node.teachers) --teacher_load[t];
    class_load[node.klass] -= static_cast<int>(node.sessions.size());
    path.pop_back();
    on_path[n] = false;
  }
};

}  // namespace

std::vector<BlockPath> find_half_loops(const Instance& inst, const BlockGraph& g,
                                       std::vector<bool>& used, const DetectorOptions& opts) {
  std::vector<BlockPath> out;
  const int n = static_cast<int>(g.nodes.size());
  for (int len = 3; len <= opts.max_cycle_length; ++len) {
    for (int start = 0; start < n; ++start) {
      if (used[start] || !g.nodes[start].paired()) continue;
      PathSearch ps(inst, g, used);
      std::vector<int> found;
      std::function<bool()> dfs = [&]() -> bool {
        const int last = ps.path.back();
        if (static_cast<int>(ps.path.size()) == len) {
          const auto& adj = g.adjacency[last];
          if (!std::binary_search(adj.begin(), adj.end(), start)) return false;
          if (ps.path[1] > ps.path.back()) return false;  // each cycle once, one direction
          if (!admissible(inst, g, ps.path, false)) return false;
          found = ps.path;
          return true;
        }
        for (int next : g.adjacency[last]) {
          if (next <= start || used[next] || ps.on_path[next] || !g.nodes[next].paired()) continue;
          if (!ps.push(next)) continue;
          const bool done = dfs();
          ps.pop();
          if (done) return true;
        }
        return false;
      };
      ps.push(start);
      if (dfs()) out.push_back(emit(inst, g, found, LessonKind::half_loop, used));
    }
  }
  return out;
}

std::vector<BlockPath> find_half_chains(const Instance& inst, const BlockGraph& g,
                                        std::vector<bool>& used, const DetectorOptions& opts) {
  std::vector<BlockPath> out;
  const int n = static_cast<int>(g.nodes.size());
  for (int len = 3; len <= opts.max_chain_length; ++len) {
    for (int start = 0; start < n; ++start) {
      if (used[start] || g.nodes[start].paired()) continue;
      PathSearch ps(inst, g, used);
      std::vector<int> found;
      std::function<bool()> dfs = [&]() -> bool {
        const int last = ps.path.back();
        const int size = static_cast<int>(ps.path.size());
        for (int next : g.adjacency[last]) {
          if (used[next] || ps.on_path[next]) continue;
          const bool endpoint = !g.nodes[next].paired();
          if (endpoint != (size + 1 == len)) continue;
          if (endpoint && next < start) continue;  // each chain once, one direction
          if (!ps.push(next)) continue;
          bool done = false;
          if (endpoint) {
            if (admissible(inst, g, ps.path, true)) {
              found = ps.path;
              done = true;
            }
          } else {
            done = dfs();
          }
          ps.pop();
          if (done) return true;
        }
        return false;
      };
      ps.push(start);
      if (dfs()) out.push_back(emit(inst, g, found, LessonKind::half_chain, used));
    }
  }
  return out;
}

DetectionResult detect_blocks(const Instance& inst, const DetectorOptions& opts) {
  const BlockGraph g = build_session_graph(inst);
  std::vector<bool> used(g.nodes.size(), false);
  std::vector<BlockPath> blocks = find_half_switches(inst, g, used);
  auto loops = find_half_loops(inst, g, used, opts);
  blocks.insert(blocks.end(), loops.begin(), loops.end());
  auto chains = find_half_chains(inst, g, used, opts);
  blocks.insert(blocks.end(), chains.begin(), chains.end());
  if (blocks.empty()) return {inst, {}};

  std::vector<int> block_of(inst.lesson_count(), -1);
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    for (LessonIndex m : blocks[b].members) block_of[m] = b;
  }
  std::vector<Lesson> lessons;
  for (int l = 0; l < inst.lesson_count(); ++l) {
    const int b = block_of[l];
    if (b < 0) {
      lessons.push_back(inst.lesson(l));
    } else if (blocks[b].members.front() == l) {
      Lesson block = blocks[b].block;
      while (inst.find_lesson(block.id)) block.id += "'";
      lessons.push_back(std::move(block));
    }
  }
  return {inst.with_lessons(std::move(lessons)), std::move(blocks)};
}

int DetectionSummary::planted_hours() const {
  int n = 0;
  for (const auto& [k, r] : by_kind) n += r.planted_hours;
  return n;
}

int DetectionSummary::detected_hours() const {
  int n = 0;
  for (const auto& [k, r] : by_kind) n += r.detected_hours;
  return n;
}

DetectionSummary summarize_detection(const Instance& original, const std::vector<BlockPath>& blocks) {
  std::map<std::pair<LessonKind, int>, std::vector<LessonIndex>> groups;
  for (int l = 0; l < original.lesson_count(); ++l) {
    const auto& tag = original.lesson(l).planted;
    if (!tag || tag->kind == LessonKind::double_lesson || tag->kind == LessonKind::simple) continue;
    groups[{tag->kind, tag->group}].push_back(l);
  }
  std::set<std::pair<LessonKind, std::vector<LessonIndex>>> found;
  for (const auto& b : blocks) found.insert({b.kind, b.members});

  DetectionSummary s;
  for (const auto& [key, members] : groups) {
    auto& row = s.by_kind[key.first];
    int hours = 0;
    for (LessonIndex m : members) hours += original.lesson(m).duration;
    row.planted_hours += hours;
    row.planted_blocks += 1;
    if (found.count({key.first, members})) {
      row.detected_hours += hours;
      row.detected_blocks += 1;
    }
  }
  return s;
}

int session_hour_mass(const Instance& inst) {
  int n = 0;
  for (const auto& l : inst.lessons()) n += l.duration * static_cast<int>(l.tuples.size());
  return n;
}

}  // namespace hstt
