#include "hstt/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "json.hpp"

namespace hstt {

using nlohmann::json;

void GenSpec::validate() const {
  if (classes <= 0 || teachers <= 0 || subjects <= 0 || days <= 0 || slots_per_day <= 0) {
    throw UnsatisfiableSpec("classes, teachers, subjects, days and slots_per_day must be positive");
  }
  if (lesson_hours_per_class <= 0) throw UnsatisfiableSpec("lesson_hours_per_class must be positive");
  if (!(sparseness > 0.0 && sparseness <= 1.0)) throw UnsatisfiableSpec("sparseness must lie in (0, 1]");
  if (lesson_hours_per_class > days * slots_per_day) {
    throw UnsatisfiableSpec("lesson hours per class (" + std::to_string(lesson_hours_per_class) +
                            ") exceed the " + std::to_string(days * slots_per_day) + " periods");
  }
  if (planted.half_switch < 0 || planted.half_loop < 0 || planted.half_chain < 0 || planted.double_lesson < 0) {
    throw UnsatisfiableSpec("planted counts must be non-negative");
  }
  if (declared_blocks < 0) throw UnsatisfiableSpec("declared_blocks must be non-negative");
  if (loop_length < 3) throw UnsatisfiableSpec("loop_length must be at least 3");
  if (max_chain_middles < 1) throw UnsatisfiableSpec("max_chain_middles must be at least 1");
  if (complex_fraction < 0.0 || complex_fraction > 1.0 || single_hour_share < 0.0 || single_hour_share > 1.0 ||
      hidden_share < 0.0 || hidden_share > 1.0) {
    throw UnsatisfiableSpec("fractions must lie in [0, 1]");
  }
}

GenSpec parse_gen_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InstanceError("spec syntax error at byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw InstanceError("spec must be a JSON object");
  GenSpec s;
  try {
    s.classes = doc.value("classes", s.classes);
    s.teachers = doc.value("teachers", s.teachers);
    s.subjects = doc.value("subjects", s.subjects);
    s.days = doc.value("days", s.days);
    s.slots_per_day = doc.value("slots_per_day", s.slots_per_day);
    s.lesson_hours_per_class = doc.value("lesson_hours_per_class", s.lesson_hours_per_class);
    s.sparseness = doc.value("sparseness", s.sparseness);
    s.loop_length = doc.value("loop_length", s.loop_length);
    s.max_chain_middles = doc.value("max_chain_middles", s.max_chain_middles);
    s.complex_fraction = doc.value("complex_fraction", s.complex_fraction);
    s.single_hour_share = doc.value("single_hour_share", s.single_hour_share);
    s.hidden_share = doc.value("hidden_share", s.hidden_share);
    s.clean_hidden = doc.value("clean_hidden", s.clean_hidden);
    s.declared_blocks = doc.value("declared_blocks", s.declared_blocks);
    s.seed = doc.value("seed", s.seed);
    if (doc.contains("planted")) {
      const auto& p = doc.at("planted");
      s.planted.half_switch = p.value("half_switch", 0);
      s.planted.half_loop = p.value("half_loop", 0);
      s.planted.half_chain = p.value("half_chain", 0);
      s.planted.double_lesson = p.value("double_lesson", 0);
    }
  } catch (const json::exception& e) {
    throw InstanceError(std::string("bad spec field: ") + e.what());
  }
  return s;
}

std::string serialize_gen_spec(const GenSpec& s) {
  json doc = {
      {"classes", s.classes},
      {"teachers", s.teachers},
      {"subjects", s.subjects},
      {"days", s.days},
      {"slots_per_day", s.slots_per_day},
      {"lesson_hours_per_class", s.lesson_hours_per_class},
      {"sparseness", s.sparseness},
      {"planted",
       {{"half_switch", s.planted.half_switch},
        {"half_loop", s.planted.half_loop},
        {"half_chain", s.planted.half_chain},
        {"double_lesson", s.planted.double_lesson}}},
      {"loop_length", s.loop_length},
      {"max_chain_middles", s.max_chain_middles},
      {"complex_fraction", s.complex_fraction},
      {"single_hour_share", s.single_hour_share},
      {"hidden_share", s.hidden_share},
      {"clean_hidden", s.clean_hidden},
      {"declared_blocks", s.declared_blocks},
      {"seed", s.seed},
  };
  return doc.dump(1) + "\n";
}

double compute_sparseness(std::int64_t available_pairs, std::int64_t lesson_count, int periods) {
  if (lesson_count <= 0 || periods <= 0) return 0.0;
  return static_cast<double>(available_pairs) / (static_cast<double>(lesson_count) * periods);
}

double sparseness(const Instance& inst) {
  return compute_sparseness(inst.available_pair_count(), inst.lesson_count(), inst.periods());
}

namespace {

struct PlantedGroup {
  LessonKind kind;
  std::vector<ClassIndex> classes;  // one per node, path order
  int teachers = 0;
};

// Working state of one generation run.
struct Draft {
  const GenSpec& spec;
  Calendar cal;
  std::mt19937_64 rng;
  std::vector<Teacher> teachers;
  std::vector<SchoolClass> classes;
  std::vector<Subject> subjects;
  std::vector<Course> courses;
  std::vector<Lesson> lessons;
  std::vector<int> teacher_hours;
  std::vector<int> class_hours;
  std::vector<bool> hosts_planted;
  std::vector<bool> chain_host;  // no one-hour ordinary lessons at all
  std::vector<std::vector<bool>> protected_cell;
  // Class cells taken by planted anchors in the hidden timetable.
  std::vector<std::vector<bool>> anchor_class;
  // Teacher x day. Thinning empties the other days first, so availability
  // comes in whole working days as in part-time school staffing.
  std::vector<std::vector<bool>> working_day;

  explicit Draft(const GenSpec& s)
      : spec(s), cal{s.days, s.slots_per_day}, rng(s.seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

  CourseIndex add_course(const std::string& id, std::vector<int> structure) {
    courses.push_back({id, std::move(structure)});
    return static_cast<CourseIndex>(courses.size() - 1);
  }

  void add_lesson(const std::string& id, TeacherIndex t, ClassIndex c, SubjectIndex sub, int duration,
                  LessonKind kind, CourseIndex course, std::optional<PlantedTag> tag) {
    Lesson l;
    l.id = id;
    l.tuples = {{t, c, sub}};
    l.duration = duration;
    l.kind = kind;
    l.courses = {course};
    l.planted = tag;
    lessons.push_back(std::move(l));
    teacher_hours[t] += duration;
  }
};

int group_size(const GenSpec& spec, LessonKind kind, int chain_middles) {
  switch (kind) {
    case LessonKind::half_switch: return 2;
    case LessonKind::half_loop: return spec.loop_length;
    default: return chain_middles + 2;
  }
}

// Switch and loop groups may share classes (at most two nodes per class, any two
// groups sharing at most one class); chain groups get classes of their own.
std::vector<PlantedGroup> allocate_groups(Draft& d) {
  const GenSpec& spec = d.spec;
  std::vector<PlantedGroup> groups;
  std::vector<int> hosted(spec.classes, 0);
  std::vector<bool> chain_class(spec.classes, false);

  std::vector<ClassIndex> order(spec.classes);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), d.rng);

  // Chains take classes from the back of the shuffled order.
  std::vector<PlantedGroup> chains;
  int back = spec.classes;
  for (int i = 0; i < spec.planted.half_chain; ++i) {
    const int middles = d.uniform(1, spec.max_chain_middles);
    const int size = middles + 2;
    if (back - size < 0) throw UnsatisfiableSpec("not enough classes for the planted half chains");
    PlantedGroup g{LessonKind::half_chain, {}, middles + 1};
    for (int k = 0; k < size; ++k) {
      const ClassIndex c = order[--back];
      chain_class[c] = true;
      g.classes.push_back(c);
    }
    chains.push_back(std::move(g));
  }

  auto place = [&](LessonKind kind, int count) {
    for (int i = 0; i < count; ++i) {
      const int size = group_size(spec, kind, 0);
      bool placed = false;
      for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
        std::vector<ClassIndex> pool;
        for (ClassIndex c = 0; c < spec.classes; ++c) {
          if (!chain_class[c] && hosted[c] < 2) pool.push_back(c);
        }
        std::shuffle(pool.begin(), pool.end(), d.rng);
        std::stable_sort(pool.begin(), pool.end(), [&](ClassIndex a, ClassIndex b) { return hosted[a] < hosted[b]; });
        if (static_cast<int>(pool.size()) < size) break;
        // Late attempts draw from the whole pool instead of the least-loaded prefix.
        const int window = attempt < 200 ? size : static_cast<int>(pool.size());
        std::vector<ClassIndex> pick(pool.begin(), pool.begin() + window);
        std::shuffle(pick.begin(), pick.end(), d.rng);
        pick.resize(size);
        std::set<ClassIndex> mine(pick.begin(), pick.end());
        const bool ok = std::all_of(groups.begin(), groups.end(), [&](const PlantedGroup& g) {
          int shared = 0;
          for (ClassIndex c : g.classes) shared += static_cast<int>(mine.count(c));
          return shared <= 1;
        });
        if (!ok) continue;
        for (ClassIndex c : pick) ++hosted[c];
        groups.push_back({kind, pick, size});
        placed = true;
      }
      if (!placed) throw UnsatisfiableSpec("not enough classes for the planted half switches and loops");
    }
  };
  place(LessonKind::half_switch, spec.planted.half_switch);
  place(LessonKind::half_loop, spec.planted.half_loop);
  for (auto& g : chains) groups.push_back(std::move(g));
  return groups;
}

std::string kind_tag(LessonKind k) {
  switch (k) {
    case LessonKind::half_switch: return "sw";
    case LessonKind::half_loop: return "lp";
    case LessonKind::half_chain: return "ch";
    case LessonKind::double_lesson: return "dl";
    default: return "x";
  }
}

// Emits the sessions of every planted group, assigning each group its own
// teachers starting at `next_teacher`, and protects one shared anchor period.
int emit_planted(Draft& d, const std::vector<PlantedGroup>& groups, int next_teacher) {
  const int h = d.cal.slots_per_day;
  const int p = d.cal.periods();
  int counter[5] = {0, 0, 0, 0, 0};
  for (const auto& g : groups) {
    const int number = ++counter[static_cast<int>(g.kind)];
    const std::string base = "p" + kind_tag(g.kind) + std::to_string(number);
    if (next_teacher + g.teachers > d.spec.teachers) {
      throw UnsatisfiableSpec("not enough teachers for the planted blocks");
    }
    std::vector<TeacherIndex> ts(g.teachers);
    std::iota(ts.begin(), ts.end(), next_teacher);
    next_teacher += g.teachers;

    std::vector<Period> options;
    for (Period q = 0; q < p; ++q) {
      if (g.kind == LessonKind::half_chain && q % h != 0 && q % h != h - 1) continue;
      if (std::none_of(g.classes.begin(), g.classes.end(), [&](ClassIndex c) { return d.anchor_class[c][q]; })) {
        options.push_back(q);
      }
    }
    if (options.empty()) throw UnsatisfiableSpec("no free anchor period for planted group " + base);
    const Period anchor = options[d.uniform(0, static_cast<int>(options.size()) - 1)];
    for (TeacherIndex t : ts) d.protected_cell[t][anchor] = true;
    for (ClassIndex c : g.classes) d.anchor_class[c][anchor] = true;

    const PlantedTag tag{g.kind, number};
    auto session = [&](int node, TeacherIndex t) {
      const ClassIndex c = g.classes[node];
      const SubjectIndex sub = d.uniform(0, d.spec.subjects - 1);
      const std::string id = base + "-" + std::to_string(node + 1) + "-" + d.teachers[t].id;
      const CourseIndex course = d.add_course(id, {1});
      d.add_lesson(id, t, c, sub, 1, LessonKind::simple, course, tag);
      d.hosts_planted[c] = true;
      if (g.kind == LessonKind::half_chain) d.chain_host[c] = true;
    };
    const int n = static_cast<int>(g.classes.size());
    for (int node = 0; node < n; ++node) {
      const ClassIndex c = g.classes[node];
      d.class_hours[c] += 1;
      switch (g.kind) {
        case LessonKind::half_switch:
          session(node, ts[0]);
          session(node, ts[1]);
          break;
        case LessonKind::half_loop:
          session(node, ts[node]);
          session(node, ts[(node + 1) % n]);
          break;
        default:
          if (node > 0) session(node, ts[node - 1]);
          if (node < n - 1) session(node, ts[node]);
          break;
      }
    }
  }
  return next_teacher;
}

// Splits r hours into lesson durations for one class.
std::vector<int> draw_durations(Draft& d, int r, bool restricted) {
  const int h = d.cal.slots_per_day;
  std::vector<int> out;
  if (restricted) {
    // Twos and threes only, so no ordinary session can pair with a chain endpoint.
    while (r > 0) {
      int dur = 2;
      if (r == 1 || h < 2) {
        dur = 1;
      } else if (h >= 3 && (r == 3 || (r > 4 && d.unit() < 0.3))) {
        dur = 3;
      }
      out.push_back(dur);
      r -= dur;
    }
  } else {
    while (r > 0) {
      int dur = 1;
      if (d.unit() >= d.spec.single_hour_share) dur = (h >= 3 && d.unit() < 0.25) ? 3 : 2;
      dur = std::min({dur, r, h});
      out.push_back(dur);
      r -= dur;
    }
  }
  std::shuffle(out.begin(), out.end(), d.rng);
  return out;
}

// Initial working days per teacher: enough whole days for the sparseness target,
// always including the days of protected anchor cells. Ordinary lessons may
// open further days when no teacher fits otherwise.
void assign_working_days(Draft& d) {
  const int days = d.cal.days;
  const int budget = std::clamp(static_cast<int>(std::ceil(d.spec.sparseness * days)), 1, days);
  d.working_day.assign(d.teachers.size(), std::vector<bool>(days, false));
  for (std::size_t t = 0; t < d.teachers.size(); ++t) {
    auto& open = d.working_day[t];
    for (Period q = 0; q < d.cal.periods(); ++q) {
      if (d.protected_cell[t][q]) open[d.cal.day_of(q)] = true;
    }
    std::vector<int> order(days);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), d.rng);
    for (int day : order) {
      if (std::count(open.begin(), open.end(), true) >= budget) break;
      open[day] = true;
    }
  }
}

// Random in-day start for each duration on the class grid, longest first.
// Returns false when some lesson does not fit.
bool pack_class(Draft& d, const std::vector<bool>& taken, const std::vector<int>& durations,
                const std::vector<int>& course_of, std::vector<Period>& starts) {
  const int p = d.cal.periods();
  const int h = d.cal.slots_per_day;
  std::vector<std::size_t> order(durations.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return durations[a] > durations[b]; });
  std::vector<bool> busy = taken;
  std::vector<bool> placed(durations.size(), false);
  starts.assign(durations.size(), 0);
  for (std::size_t i : order) {
    std::vector<Period> options;
    for (Period q = 0; q + durations[i] <= p; ++q) {
      if (q % h + durations[i] > h) continue;
      if (d.spec.clean_hidden) {
        bool apart = true;
        for (std::size_t j = 0; j < durations.size() && apart; ++j) {
          if (placed[j] && course_of[j] == course_of[i]) apart = std::abs(starts[j] / h - q / h) > 1;
        }
        if (!apart) continue;
      }
      bool ok = true;
      for (int k = 0; k < durations[i] && ok; ++k) ok = !busy[q + k];
      if (ok) options.push_back(q);
    }
    if (options.empty()) return false;
    starts[i] = options[d.uniform(0, static_cast<int>(options.size()) - 1)];
    placed[i] = true;
    for (int k = 0; k < durations[i]; ++k) busy[starts[i] + k] = true;
  }
  return true;
}

// With clean_hidden the class's hidden layout has no gaps and no day with more
// than ceil(h/2) complex hours. Subjects may be reshuffled to get there.
bool hidden_layout_clean(Draft& d, ClassIndex c, const std::vector<int>& durations,
                         const std::vector<int>& course_of, const std::vector<Period>& starts,
                         std::vector<SubjectIndex>& subjects) {
  const int h = d.cal.slots_per_day;
  std::vector<bool> busy = d.anchor_class[c];
  for (std::size_t i = 0; i < durations.size(); ++i) {
    for (int k = 0; k < durations[i]; ++k) busy[starts[i] + k] = true;
  }
  for (int day = 0; day < d.cal.days; ++day) {
    int first = -1, last = -1, used = 0;
    for (int s = 0; s < h; ++s) {
      if (!busy[day * h + s]) continue;
      if (first < 0) first = s;
      last = s;
      ++used;
    }
    if (used > 0 && last - first + 1 != used) return false;
  }
  const int limit = (h + 1) / 2;
  for (int tries = 0; tries < 50; ++tries) {
    std::vector<int> complex_hours(d.cal.days, 0);
    for (std::size_t i = 0; i < durations.size(); ++i) {
      const SubjectIndex sub = subjects[course_of[i] % subjects.size()];
      if (!d.subjects[sub].complex_for.empty()) complex_hours[starts[i] / h] += durations[i];
    }
    if (std::all_of(complex_hours.begin(), complex_hours.end(), [&](int x) { return x <= limit; })) return true;
    std::shuffle(subjects.begin(), subjects.end(), d.rng);
  }
  return false;
}

// Ordinary lessons are laid out on a hidden timetable as they are created: each
// class's lessons get conflict-free periods first, then every course goes to a
// teacher free at all its periods. Those teacher cells are protected from
// thinning, so the finished instance always admits a complete timetable.
void emit_ordinary(Draft& d, int first_teacher) {
  const GenSpec& spec = d.spec;
  const int nt = spec.teachers;
  const int p = d.cal.periods();
  if (first_teacher >= nt) {
    for (int c = 0; c < spec.classes; ++c) {
      if (d.class_hours[c] < spec.lesson_hours_per_class) {
        throw UnsatisfiableSpec("no teachers left for ordinary lessons");
      }
    }
    return;
  }
  std::vector<TeacherIndex> pool(nt - first_teacher);
  std::iota(pool.begin(), pool.end(), first_teacher);
  auto main_subject = [&](TeacherIndex t) { return (t - first_teacher) % spec.subjects; };
  std::vector<std::vector<bool>> teacher_busy(nt, std::vector<bool>(p, false));
  // Classes where each teacher has one-hour lessons. A teacher with one-hour
  // lessons in a planted host class has them nowhere else, which keeps the
  // planted sessions the best pairing candidates of that class.
  std::vector<std::set<ClassIndex>> one_hour_classes(nt);
  auto one_hour_ok = [&](TeacherIndex t, ClassIndex c) {
    const auto& mine = one_hour_classes[t];
    if (mine.empty() || (mine.size() == 1 && *mine.begin() == c)) return true;
    if (d.hosts_planted[c]) return false;
    return std::none_of(mine.begin(), mine.end(), [&](ClassIndex o) { return d.hosts_planted[o]; });
  };

  // Double lessons are spread round-robin over the classes.
  std::vector<int> doubles(spec.classes, 0);
  const int offset = d.uniform(0, spec.classes - 1);
  for (int i = 0; i < spec.planted.double_lesson; ++i) ++doubles[(offset + i) % spec.classes];
  if (spec.planted.double_lesson > 0 && d.cal.slots_per_day < 2) {
    throw UnsatisfiableSpec("double lessons need at least two slots per day");
  }
  int double_number = 0;

  int ordinary_hours = 0;
  for (ClassIndex c = 0; c < spec.classes; ++c) ordinary_hours += spec.lesson_hours_per_class - d.class_hours[c];
  const int load_cap = (ordinary_hours + static_cast<int>(pool.size()) - 1) / static_cast<int>(pool.size()) + 1;

  // Declared blocks: curriculum half switches (two classes, two teachers, one
  // period) that arrive already merged, fixed in the hidden timetable before the
  // per-class layout. Chain classes stay out of them.
  for (int j = 0; j < spec.declared_blocks; ++j) {
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const ClassIndex a = d.uniform(0, spec.classes - 1);
      const ClassIndex b = d.uniform(0, spec.classes - 1);
      if (a == b || d.chain_host[a] || d.chain_host[b]) continue;
      if (d.class_hours[a] >= spec.lesson_hours_per_class || d.class_hours[b] >= spec.lesson_hours_per_class) continue;
      std::vector<Period> spans;
      for (Period q = 0; q < p; ++q) {
        if (!d.anchor_class[a][q] && !d.anchor_class[b][q]) spans.push_back(q);
      }
      if (spans.empty()) continue;
      const Period q = spans[d.uniform(0, static_cast<int>(spans.size()) - 1)];
      auto key = [&](TeacherIndex t) {
        return std::make_tuple(d.teacher_hours[t] + 1 > load_cap, d.working_day[t][d.cal.day_of(q)] ? 0 : 1,
                               d.teacher_hours[t], t);
      };
      std::vector<TeacherIndex> free;
      for (TeacherIndex t : pool) {
        if (!teacher_busy[t][q]) free.push_back(t);
      }
      if (free.size() < 2) continue;
      std::partial_sort(free.begin(), free.begin() + 2, free.end(),
                        [&](TeacherIndex x, TeacherIndex y) { return key(x) < key(y); });
      const ClassIndex lo = std::min(a, b), hi = std::max(a, b);
      const std::string id = "b" + std::to_string(j + 1) + "-" + d.classes[lo].id + "-" + d.classes[hi].id;
      Lesson les;
      les.id = id;
      les.kind = LessonKind::half_switch;
      for (ClassIndex c : {lo, hi}) {
        for (int k = 0; k < 2; ++k) les.tuples.push_back({free[k], c, d.uniform(0, spec.subjects - 1)});
      }
      les.courses = {d.add_course(id, {1})};
      d.lessons.push_back(std::move(les));
      for (int k = 0; k < 2; ++k) {
        teacher_busy[free[k]][q] = d.protected_cell[free[k]][q] = true;
        d.working_day[free[k]][d.cal.day_of(q)] = true;
        d.teacher_hours[free[k]] += 1;
      }
      d.anchor_class[a][q] = d.anchor_class[b][q] = true;
      d.class_hours[a] += 1;
      d.class_hours[b] += 1;
      placed = true;
    }
    if (!placed) throw UnsatisfiableSpec("cannot place declared block " + std::to_string(j + 1));
  }


  for (ClassIndex c = 0; c < spec.classes; ++c) {
    const std::string cid = d.classes[c].id;
    const int remaining = spec.lesson_hours_per_class - d.class_hours[c] - 2 * doubles[c];
    if (remaining < 0) throw UnsatisfiableSpec("planted sessions exceed the hours of class " + cid);

    // Courses as duration lists; the first doubles[c] are declared double lessons.
    // Durations are redrawn when a draw cannot be packed around the anchors.
    std::vector<std::vector<int>> structures;
    std::vector<Period> starts;
    std::vector<SubjectIndex> subjects(spec.subjects);
    std::iota(subjects.begin(), subjects.end(), 0);
    bool packed = false;
    for (int attempt = 0; attempt < 400 && !packed; ++attempt) {
      structures.assign(doubles[c], std::vector<int>{2});
      const auto durations = draw_durations(d, remaining, d.chain_host[c]);
      for (std::size_t i = 0; i < durations.size();) {
        std::vector<int> structure{durations[i++]};
        if (i < durations.size() && structure[0] + durations[i] <= 4) structure.push_back(durations[i++]);
        structures.push_back(std::move(structure));
      }
      std::vector<int> flat, course_of;
      for (std::size_t k = 0; k < structures.size(); ++k) {
        flat.insert(flat.end(), structures[k].begin(), structures[k].end());
        course_of.insert(course_of.end(), structures[k].size(), static_cast<int>(k));
      }
      packed = pack_class(d, d.anchor_class[c], flat, course_of, starts);
      std::shuffle(subjects.begin(), subjects.end(), d.rng);
      if (packed && spec.clean_hidden) {
        packed = hidden_layout_clean(d, c, flat, course_of, starts, subjects);
      }
    }
    if (!packed) throw UnsatisfiableSpec("cannot lay out the lessons of class " + cid + " in one week");

    std::size_t next = 0;
    for (std::size_t k = 0; k < structures.size(); ++k) {
      const auto& structure = structures[k];
      const SubjectIndex sub = subjects[k % subjects.size()];
      std::vector<Period> cells;
      for (std::size_t j = 0; j < structure.size(); ++j) {
        for (int u = 0; u < structure[j]; ++u) cells.push_back(starts[next + j] + u);
      }
      const int hours = static_cast<int>(cells.size());
      const bool one_hour = std::find(structure.begin(), structure.end(), 1) != structure.end();
      auto free_for = [&](TeacherIndex t) {
        if (one_hour && !one_hour_ok(t, c)) return false;
        return std::none_of(cells.begin(), cells.end(), [&](Period q) { return teacher_busy[t][q]; });
      };
      // Among free teachers: those staying under the even-load cap; for one-hour lessons of a host class, teachers already
      // bound to it first; then teachers of the subject; then the least loaded.
      auto key = [&](TeacherIndex t) {
        const bool unbound = one_hour && d.hosts_planted[c] && one_hour_classes[t].empty();
        int new_days = 0;
        for (int day = 0; day < d.cal.days; ++day) {
          if (d.working_day[t][day]) continue;
          new_days += std::any_of(cells.begin(), cells.end(), [&](Period q) { return d.cal.day_of(q) == day; });
        }
        return std::make_tuple(d.teacher_hours[t] + hours > load_cap, unbound, new_days, main_subject(t) != sub,
                               d.teacher_hours[t], t);
      };
      TeacherIndex best = -1;
      for (TeacherIndex t : pool) {
        if (free_for(t) && (best < 0 || key(t) < key(best))) best = t;
      }
      if (best < 0) throw UnsatisfiableSpec("teacher demand exceeds supply at class " + cid);
      if (one_hour) one_hour_classes[best].insert(c);
      for (Period q : cells) d.working_day[best][d.cal.day_of(q)] = true;
      const bool keep = d.unit() < spec.hidden_share;
      for (Period q : cells) {
        teacher_busy[best][q] = true;
        if (keep) d.protected_cell[best][q] = true;
      }

      const bool is_double = static_cast<int>(k) < doubles[c];
      if (is_double) {
        const int number = ++double_number;
        const std::string id = cid + "-d" + std::to_string(number);
        const CourseIndex course = d.add_course(id, structure);
        d.add_lesson(id, best, c, sub, 2, LessonKind::double_lesson, course,
                     PlantedTag{LessonKind::double_lesson, number});
      } else {
        const std::string base = cid + "-" + d.subjects[sub].id + "-" + std::to_string(k + 1);
        const CourseIndex course = d.add_course(base, structure);
        for (std::size_t j = 0; j < structure.size(); ++j) {
          d.add_lesson(base + "-" + std::to_string(j + 1), best, c, sub, structure[j], LessonKind::simple, course,
                       std::nullopt);
        }
      }
      d.class_hours[c] += hours;
      next += structure.size();
    }
  }
}


// Removes random teacher-period cells until the sparseness target is met. Every
// teacher keeps at least as many periods as it teaches hours, every lesson keeps
// a start period, and anchor cells stay.
void thin_availability(Draft& d) {
  const int p = d.cal.periods();
  const int h = d.cal.slots_per_day;
  const int nt = static_cast<int>(d.teachers.size());
  const std::int64_t lessons = static_cast<std::int64_t>(d.lessons.size());
  if (lessons == 0 || d.spec.sparseness >= 1.0) return;

  std::vector<std::vector<int>> lessons_of(nt);
  for (int l = 0; l < static_cast<int>(d.lessons.size()); ++l) {
    lessons_of[d.lessons[l].tuples.front().teacher].push_back(l);
  }
  std::vector<int> avail(nt, p);
  std::int64_t pairs = lessons * p;
  const double target = d.spec.sparseness * static_cast<double>(lessons * p);

  auto has_start = [&](const Lesson& les, const std::vector<bool>& av) {
    for (Period q = 0; q + les.duration <= p; ++q) {
      if (q % h + les.duration > h) continue;
      bool ok = true;
      for (int k = 0; k < les.duration && ok; ++k) ok = av[q + k];
      if (ok) return true;
    }
    return false;
  };

  std::vector<std::pair<TeacherIndex, Period>> cells, off_day;
  for (TeacherIndex t = 0; t < nt; ++t) {
    for (Period q = 0; q < p; ++q) {
      if (d.protected_cell[t][q]) continue;
      (d.working_day[t][d.cal.day_of(q)] ? cells : off_day).emplace_back(t, q);
    }
  }
  std::shuffle(cells.begin(), cells.end(), d.rng);
  std::shuffle(off_day.begin(), off_day.end(), d.rng);
  cells.insert(cells.begin(), off_day.begin(), off_day.end());

  for (const auto& [t, q] : cells) {
    if (static_cast<double>(pairs) <= target) break;
    const auto weight = static_cast<std::int64_t>(lessons_of[t].size());
    // Skip removals that would overshoot further than they currently miss.
    if (target - static_cast<double>(pairs - weight) > static_cast<double>(pairs) - target) continue;
    if (avail[t] - 1 < d.teacher_hours[t]) continue;
    auto& av = d.teachers[t].available;
    av[q] = false;
    const bool ok = std::all_of(lessons_of[t].begin(), lessons_of[t].end(),
                                [&](int l) { return has_start(d.lessons[l], av); });
    if (!ok) {
      av[q] = true;
      continue;
    }
    --avail[t];
    pairs -= weight;
  }

  const double reached = compute_sparseness(pairs, lessons, p);
  if (std::abs(reached - d.spec.sparseness) > kSparsenessTolerance) {
    throw UnsatisfiableSpec("cannot thin availability to sparseness " + std::to_string(d.spec.sparseness) +
                            " (reached " + std::to_string(reached) + ")");
  }
}

}  // namespace

Instance generate_instance(const GenSpec& spec) {
  spec.validate();
  Draft d(spec);
  const int p = d.cal.periods();

  for (int t = 0; t < spec.teachers; ++t) d.teachers.push_back({"t" + std::to_string(t + 1), std::vector<bool>(p, true)});
  for (int c = 0; c < spec.classes; ++c) {
    d.classes.push_back({"c" + std::to_string(c + 1), std::vector<bool>(p, true), std::nullopt});
  }
  for (int s = 0; s < spec.subjects; ++s) d.subjects.push_back({"s" + std::to_string(s + 1), {}});
  for (auto& sub : d.subjects) {
    if (d.unit() < spec.complex_fraction) {
      for (int c = 0; c < spec.classes; ++c) sub.complex_for.push_back(c);
    }
  }
  d.teacher_hours.assign(spec.teachers, 0);
  d.class_hours.assign(spec.classes, 0);
  d.hosts_planted.assign(spec.classes, false);
  d.chain_host.assign(spec.classes, false);
  d.protected_cell.assign(spec.teachers, std::vector<bool>(p, false));
  d.anchor_class.assign(spec.classes, std::vector<bool>(p, false));

  const auto groups = allocate_groups(d);
  const int next_teacher = emit_planted(d, groups, 0);
  assign_working_days(d);
  emit_ordinary(d, next_teacher);
  thin_availability(d);

  return Instance(d.cal, std::move(d.teachers), std::move(d.classes), std::move(d.subjects), std::move(d.courses),
                  std::move(d.lessons));
}

}  // namespace hstt
