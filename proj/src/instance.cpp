#include "hstt/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace hstt {

using nlohmann::json;

int Calendar::day_of(Period q) const {
  if (q < 0 || q >= periods()) {
    throw std::out_of_range("period " + std::to_string(q) + " outside calendar of " +
                            std::to_string(periods()) + " periods");
  }
  return q / slots_per_day;
}

int Calendar::slot_of(Period q) const {
  if (q < 0 || q >= periods()) {
    throw std::out_of_range("period " + std::to_string(q) + " outside calendar");
  }
  return q % slots_per_day;
}

int period_day(Period q, const Calendar& cal) { return cal.day_of(q); }

std::string_view to_string(LessonKind kind) {
  switch (kind) {
    case LessonKind::simple: return "simple";
    case LessonKind::half_switch: return "half_switch";
    case LessonKind::double_lesson: return "double_lesson";
    case LessonKind::half_loop: return "half_loop";
    case LessonKind::half_chain: return "half_chain";
  }
  return "simple";
}

LessonKind lesson_kind_from_string(std::string_view text) {
  for (auto k : {LessonKind::simple, LessonKind::half_switch, LessonKind::double_lesson,
                 LessonKind::half_loop, LessonKind::half_chain}) {
    if (to_string(k) == text) return k;
  }
  throw InstanceError("unknown lesson kind '" + std::string(text) + "'");
}

Instance::Instance(Calendar calendar, std::vector<Teacher> teachers, std::vector<SchoolClass> classes,
                   std::vector<Subject> subjects, std::vector<Course> courses,
                   std::vector<Lesson> lessons, Weights weights)
    : calendar_(calendar),
      teachers_(std::move(teachers)),
      classes_(std::move(classes)),
      subjects_(std::move(subjects)),
      courses_(std::move(courses)),
      lessons_(std::move(lessons)),
      weights_(weights) {
  validate_and_index();
}

namespace {

template <typename T>
void check_unique_ids(const std::vector<T>& items, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& item : items) {
    if (item.id.empty()) throw InstanceError(std::string("empty ") + what + " id");
    if (!seen.insert(item.id).second) {
      throw InstanceError(std::string("duplicate ") + what + " id '" + item.id + "'");
    }
  }
}

}  // namespace

void Instance::validate_and_index() {
  if (calendar_.days <= 0 || calendar_.slots_per_day <= 0) {
    throw InstanceError("calendar needs positive days and slots_per_day");
  }
  const int p = periods();
  check_unique_ids(teachers_, "teacher");
  check_unique_ids(classes_, "class");
  check_unique_ids(subjects_, "subject");
  check_unique_ids(courses_, "course");
  check_unique_ids(lessons_, "lesson");

  for (auto& t : teachers_) {
    if (t.available.empty()) t.available.assign(p, true);
    if (static_cast<int>(t.available.size()) != p) {
      throw InstanceError("teacher '" + t.id + "' availability does not match calendar");
    }
  }
  for (auto& c : classes_) {
    if (c.available.empty()) c.available.assign(p, true);
    if (static_cast<int>(c.available.size()) != p) {
      throw InstanceError("class '" + c.id + "' availability does not match calendar");
    }
  }
  for (auto& s : subjects_) {
    for (ClassIndex c : s.complex_for) {
      if (c < 0 || c >= class_count()) throw InstanceError("subject '" + s.id + "' has bad class ref");
    }
    std::sort(s.complex_for.begin(), s.complex_for.end());
    s.complex_for.erase(std::unique(s.complex_for.begin(), s.complex_for.end()), s.complex_for.end());
  }

  for (auto& l : lessons_) {
    if (l.tuples.empty()) throw InstanceError("lesson '" + l.id + "' has no tuples");
    if (l.duration < 1) throw InstanceError("lesson '" + l.id + "' has non-positive duration");
    if (l.duration > calendar_.slots_per_day) {
      throw InstanceError("lesson '" + l.id + "' is longer than a day");
    }
    if (l.kind == LessonKind::simple && l.tuples.size() != 1) {
      throw InstanceError("simple lesson '" + l.id + "' must have exactly one tuple");
    }
    if (l.courses.empty()) throw InstanceError("lesson '" + l.id + "' has no course");
    for (CourseIndex k : l.courses) {
      if (k < 0 || k >= static_cast<int>(courses_.size())) {
        throw InstanceError("lesson '" + l.id + "' has bad course ref");
      }
    }
    std::sort(l.courses.begin(), l.courses.end());
    l.courses.erase(std::unique(l.courses.begin(), l.courses.end()), l.courses.end());
    l.teachers.clear();
    l.classes.clear();
    for (const auto& tu : l.tuples) {
      if (tu.teacher < 0 || tu.teacher >= teacher_count() || tu.klass < 0 ||
          tu.klass >= class_count() || tu.subject < 0 ||
          tu.subject >= static_cast<int>(subjects_.size())) {
        throw InstanceError("lesson '" + l.id + "' has bad tuple ref");
      }
      l.teachers.push_back(tu.teacher);
      l.classes.push_back(tu.klass);
    }
    std::sort(l.teachers.begin(), l.teachers.end());
    l.teachers.erase(std::unique(l.teachers.begin(), l.teachers.end()), l.teachers.end());
    std::sort(l.classes.begin(), l.classes.end());
    l.classes.erase(std::unique(l.classes.begin(), l.classes.end()), l.classes.end());
  }

  const int n = lesson_count();
  const int h = calendar_.slots_per_day;
  avl_.assign(static_cast<std::size_t>(n) * p, 0);
  cplx_.assign(static_cast<std::size_t>(n) * class_count(), 0);
  placeable_.assign(n, {});
  for (int l = 0; l < n; ++l) {
    const auto& les = lessons_[l];
    for (int q = 0; q < p; ++q) {
      bool ok = true;
      for (TeacherIndex t : les.teachers) ok = ok && teachers_[t].available[q];
      for (ClassIndex c : les.classes) ok = ok && classes_[c].available[q];
      avl_[l * p + q] = ok ? 1 : 0;
    }
    for (const auto& tu : les.tuples) {
      const auto& cf = subjects_[tu.subject].complex_for;
      if (std::binary_search(cf.begin(), cf.end(), tu.klass)) cplx_[l * class_count() + tu.klass] = 1;
    }
    for (int q = 0; q < p; ++q) {
      const int slot = q % h;
      if (slot + les.duration > h) continue;
      if (les.edge_preference && slot != 0 && slot + les.duration != h) continue;
      bool ok = true;
      for (int k = 0; k < les.duration && ok; ++k) ok = avl_[l * p + q + k] != 0;
      if (ok) placeable_[l].push_back(q);
    }
  }

  std::vector<std::vector<LessonIndex>> by_course(courses_.size());
  for (int l = 0; l < n; ++l) {
    for (CourseIndex k : lessons_[l].courses) by_course[k].push_back(l);
  }
  mates_.assign(n, {});
  for (int l = 0; l < n; ++l) {
    auto& m = mates_[l];
    for (CourseIndex k : lessons_[l].courses) {
      for (LessonIndex o : by_course[k]) {
        if (o != l) m.push_back(o);
      }
    }
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
}

bool Instance::same_course(LessonIndex a, LessonIndex b) const {
  const auto& m = mates_[a];
  return std::binary_search(m.begin(), m.end(), b);
}

bool Instance::placeable(LessonIndex l, Period q) const {
  const auto& s = placeable_[l];
  return std::binary_search(s.begin(), s.end(), q);
}

std::int64_t Instance::available_pair_count() const {
  std::int64_t n = 0;
  for (auto v : avl_) n += v;
  return n;
}

std::optional<LessonIndex> Instance::find_lesson(std::string_view id) const {
  for (int i = 0; i < lesson_count(); ++i) {
    if (lessons_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<TeacherIndex> Instance::find_teacher(std::string_view id) const {
  for (int i = 0; i < teacher_count(); ++i) {
    if (teachers_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<ClassIndex> Instance::find_class(std::string_view id) const {
  for (int i = 0; i < class_count(); ++i) {
    if (classes_[i].id == id) return i;
  }
  return std::nullopt;
}

Instance Instance::with_weights(const Weights& w) const {
  Instance copy = *this;
  copy.weights_ = w;
  return copy;
}

Instance Instance::with_lessons(std::vector<Lesson> lessons) const {
  return Instance(calendar_, teachers_, classes_, subjects_, courses_, std::move(lessons), weights_);
}

bool Instance::operator==(const Instance& o) const {
  return calendar_ == o.calendar_ && teachers_ == o.teachers_ && classes_ == o.classes_ &&
         subjects_ == o.subjects_ && courses_ == o.courses_ && lessons_ == o.lessons_ &&
         weights_ == o.weights_;
}

// ---------------------------------------------------------------------------
// JSON format

namespace {

std::vector<bool> read_availability(const json& node, int p, const std::string& owner) {
  if (!node.contains("available_periods")) return std::vector<bool>(p, true);
  std::vector<bool> av(p, false);
  for (const auto& v : node.at("available_periods")) {
    const int q = v.get<int>();
    if (q < 0 || q >= p) {
      throw InstanceError("'" + owner + "' lists period " + std::to_string(q) + " outside calendar");
    }
    av[q] = true;
  }
  return av;
}

json write_availability(const std::vector<bool>& av) {
  json arr = json::array();
  for (std::size_t q = 0; q < av.size(); ++q) {
    if (av[q]) arr.push_back(q);
  }
  return arr;
}

bool all_true(const std::vector<bool>& v) {
  return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

template <typename T>
std::unordered_map<std::string, int> index_by_id(const std::vector<T>& items) {
  std::unordered_map<std::string, int> m;
  for (int i = 0; i < static_cast<int>(items.size()); ++i) m.emplace(items[i].id, i);
  return m;
}

int resolve(const std::unordered_map<std::string, int>& m, const std::string& key, const char* what,
            const std::string& owner) {
  auto it = m.find(key);
  if (it == m.end()) {
    throw InstanceError(owner + " references unknown " + what + " '" + key + "'");
  }
  return it->second;
}

Instance from_json(const json& doc) {
  const auto& cal = doc.at("calendar");
  Calendar calendar{cal.at("days").get<int>(), cal.at("slots_per_day").get<int>()};
  if (calendar.days <= 0 || calendar.slots_per_day <= 0) {
    throw InstanceError("calendar needs positive days and slots_per_day");
  }
  const int p = calendar.periods();

  std::vector<Teacher> teachers;
  for (const auto& t : doc.at("teachers")) {
    Teacher tt;
    tt.id = t.at("id").get<std::string>();
    tt.available = read_availability(t, p, tt.id);
    teachers.push_back(std::move(tt));
  }
  std::vector<SchoolClass> classes;
  for (const auto& c : doc.at("classes")) {
    SchoolClass cc;
    cc.id = c.at("id").get<std::string>();
    cc.available = read_availability(c, p, cc.id);
    if (c.contains("curriculum")) cc.curriculum = c.at("curriculum").get<std::string>();
    classes.push_back(std::move(cc));
  }
  check_unique_ids(teachers, "teacher");
  check_unique_ids(classes, "class");
  const auto class_ix = index_by_id(classes);
  const auto teacher_ix = index_by_id(teachers);

  std::vector<Subject> subjects;
  for (const auto& s : doc.at("subjects")) {
    Subject ss;
    ss.id = s.at("id").get<std::string>();
    if (s.contains("complex_for")) {
      for (const auto& c : s.at("complex_for")) {
        ss.complex_for.push_back(resolve(class_ix, c.get<std::string>(), "class", "subject '" + ss.id + "'"));
      }
    }
    subjects.push_back(std::move(ss));
  }
  check_unique_ids(subjects, "subject");
  const auto subject_ix = index_by_id(subjects);

  std::vector<Course> courses;
  if (doc.contains("courses")) {
    for (const auto& k : doc.at("courses")) {
      Course kk;
      kk.id = k.at("id").get<std::string>();
      if (k.contains("structure")) kk.structure = k.at("structure").get<std::vector<int>>();
      courses.push_back(std::move(kk));
    }
  }
  check_unique_ids(courses, "course");
  auto course_ix = index_by_id(courses);

  std::vector<Lesson> lessons;
  for (const auto& l : doc.at("lessons")) {
    Lesson les;
    les.id = l.at("id").get<std::string>();
    const std::string owner = "lesson '" + les.id + "'";
    les.duration = l.value("duration", 1);
    if (les.duration < 1) throw InstanceError(owner + " has zero or negative duration");
    les.kind = lesson_kind_from_string(l.value("kind", std::string("simple")));
    les.edge_preference = l.value("edge_preference", false);
    for (const auto& tu : l.at("tuples")) {
      SessionTuple st;
      st.teacher = resolve(teacher_ix, tu.at("teacher").get<std::string>(), "teacher", owner);
      st.klass = resolve(class_ix, tu.at("class").get<std::string>(), "class", owner);
      st.subject = resolve(subject_ix, tu.at("subject").get<std::string>(), "subject", owner);
      les.tuples.push_back(st);
    }
    if (!l.contains("course")) {
      // A lesson without a course forms a singleton course named after itself.
      if (course_ix.count(les.id)) throw InstanceError(owner + " has no course and its id is taken");
      course_ix.emplace(les.id, static_cast<int>(courses.size()));
      courses.push_back(Course{les.id, {les.duration}});
      les.courses.push_back(course_ix.at(les.id));
    } else if (l.at("course").is_array()) {
      for (const auto& k : l.at("course")) {
        les.courses.push_back(resolve(course_ix, k.get<std::string>(), "course", owner));
      }
    } else {
      les.courses.push_back(resolve(course_ix, l.at("course").get<std::string>(), "course", owner));
    }
    if (l.contains("planted")) {
      const auto& pl = l.at("planted");
      les.planted = PlantedTag{lesson_kind_from_string(pl.at("kind").get<std::string>()),
                               pl.at("group").get<int>()};
    }
    lessons.push_back(std::move(les));
  }

  Weights w;
  if (doc.contains("weights")) {
    const auto& jw = doc.at("weights");
    w.w1 = jw.value("w1", w.w1);
    w.w2 = jw.value("w2", w.w2);
    w.w3 = jw.value("w3", w.w3);
    w.w4 = jw.value("w4", w.w4);
    w.w5 = jw.value("w5", w.w5);
    if (w.w1 < 0 || w.w2 < 0 || w.w3 < 0 || w.w4 < 0 || w.w5 < 0) {
      throw InstanceError("weights must be non-negative");
    }
  }
  return Instance(calendar, std::move(teachers), std::move(classes), std::move(subjects),
                  std::move(courses), std::move(lessons), w);
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InstanceError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw InstanceError(std::string("malformed instance: ") + e.what());
  }
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["calendar"] = {{"days", inst.calendar().days}, {"slots_per_day", inst.calendar().slots_per_day}};
  json teachers = json::array();
  for (const auto& t : inst.teachers()) {
    json jt = {{"id", t.id}};
    if (!all_true(t.available)) jt["available_periods"] = write_availability(t.available);
    teachers.push_back(jt);
  }
  doc["teachers"] = teachers;
  json classes = json::array();
  for (const auto& c : inst.classes()) {
    json jc = {{"id", c.id}};
    if (!all_true(c.available)) jc["available_periods"] = write_availability(c.available);
    if (c.curriculum) jc["curriculum"] = *c.curriculum;
    classes.push_back(jc);
  }
  doc["classes"] = classes;
  json subjects = json::array();
  for (const auto& s : inst.subjects()) {
    json js = {{"id", s.id}};
    if (!s.complex_for.empty()) {
      json cf = json::array();
      for (ClassIndex c : s.complex_for) cf.push_back(inst.classes()[c].id);
      js["complex_for"] = cf;
    }
    subjects.push_back(js);
  }
  doc["subjects"] = subjects;
  json courses = json::array();
  for (const auto& k : inst.courses()) courses.push_back({{"id", k.id}, {"structure", k.structure}});
  doc["courses"] = courses;
  json lessons = json::array();
  for (const auto& l : inst.lessons()) {
    json jl = {{"id", l.id}, {"duration", l.duration}, {"kind", std::string(to_string(l.kind))}};
    if (l.courses.size() == 1) {
      jl["course"] = inst.courses()[l.courses.front()].id;
    } else {
      json ks = json::array();
      for (CourseIndex k : l.courses) ks.push_back(inst.courses()[k].id);
      jl["course"] = ks;
    }
    json tuples = json::array();
    for (const auto& tu : l.tuples) {
      tuples.push_back({{"teacher", inst.teachers()[tu.teacher].id},
                        {"class", inst.classes()[tu.klass].id},
                        {"subject", inst.subjects()[tu.subject].id}});
    }
    jl["tuples"] = tuples;
    if (l.edge_preference) jl["edge_preference"] = true;
    if (l.planted) {
      jl["planted"] = {{"kind", std::string(to_string(l.planted->kind))}, {"group", l.planted->group}};
    }
    lessons.push_back(jl);
  }
  doc["lessons"] = lessons;
  const auto& w = inst.weights();
  doc["weights"] = {{"w1", w.w1}, {"w2", w.w2}, {"w3", w.w3}, {"w4", w.w4}, {"w5", w.w5}};
  return doc.dump(1) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

Instance load_instance(const std::string& path) { return parse_instance(read_text_file(path)); }

}  // namespace hstt
