#include "hstt/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "hstt/constructor.hpp"
#include "json.hpp"

namespace hstt {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

double improvement_percent(std::int64_t initial, std::int64_t final_cost) {
  if (initial == 0) return 0.0;
  return 100.0 * static_cast<double>(initial - final_cost) / static_cast<double>(initial);
}

Prepared prepare(const Instance& raw) {
  DetectionResult det = detect_blocks(raw);
  ScheduleState s0 = build_initial(det.instance);
  return {std::move(det.instance), std::move(det.blocks), std::move(s0)};
}

namespace {

ojson cost_json(const CostBreakdown& c) {
  return ojson{{"f1", c.f1}, {"f2", c.f2}, {"f3", c.f3}, {"f4", c.f4}, {"f5", c.f5}, {"total", c.total}};
}

std::string period_label(const Calendar& cal, Period q) {
  return "d" + std::to_string(cal.day_of(q) + 1) + "s" + std::to_string(cal.slot_of(q) + 1);
}

std::string grid_csv(const Instance& inst, const ScheduleState& s, bool by_class) {
  std::ostringstream out;
  out << (by_class ? "class" : "teacher");
  for (Period q = 0; q < inst.periods(); ++q) out << ',' << period_label(inst.calendar(), q);
  out << '\n';
  const int rows = by_class ? inst.class_count() : inst.teacher_count();
  for (int r = 0; r < rows; ++r) {
    out << (by_class ? inst.classes()[r].id : inst.teachers()[r].id);
    for (Period q = 0; q < inst.periods(); ++q) {
      const LessonIndex l = by_class ? s.class_at(r, q) : s.teacher_at(r, q);
      out << ',';
      if (l != kEmpty) out << inst.lesson(l).id;
    }
    out << '\n';
  }
  return out.str();
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

std::string RunReport::to_json() const {
  ojson doc;
  doc["instance"] = instance_name;
  doc["variant"] = std::string(to_string(variant));
  doc["seed"] = seed;
  doc["iterations"] = iterations;
  doc["lessons"] = lessons;
  doc["blocks"] = blocks;
  doc["initial"] = cost_json(initial);
  doc["final"] = cost_json(final_cost);
  doc["improvement_percent"] = improvement;
  return doc.dump(1) + "\n";
}

SolveOutcome solve_prepared(const Prepared& prep, const SolverConfig& cfg, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  TabuSearch search(prep.instance, cfg);
  SearchResult res = search.run(prep.initial);
  const auto stop = std::chrono::steady_clock::now();

  RunReport r;
  r.instance_name = name;
  r.variant = cfg.variant;
  r.seed = cfg.seed;
  r.iterations = cfg.iterations;
  r.lessons = prep.instance.lesson_count();
  r.blocks = static_cast<int>(prep.blocks.size());
  r.initial = res.initial;
  r.final_cost = res.best_cost;
  r.improvement = improvement_percent(res.initial.total, res.best_cost.total);
  r.wall_seconds = std::chrono::duration<double>(stop - start).count();
  r.trace = std::move(res.trace);
  return {std::move(r), std::move(res.best)};
}

std::string detection_report_json(const Instance& raw, const DetectionResult& res) {
  ojson blocks = ojson::array();
  for (const auto& b : res.blocks) {
    ojson members = ojson::array(), classes = ojson::array(), teachers = ojson::array();
    for (LessonIndex l : b.members) members.push_back(raw.lesson(l).id);
    std::set<ClassIndex> cs;
    std::set<TeacherIndex> ts;
    for (const auto& tup : b.block.tuples) {
      cs.insert(tup.klass);
      ts.insert(tup.teacher);
    }
    for (ClassIndex c : cs) classes.push_back(raw.classes()[c].id);
    for (TeacherIndex t : ts) teachers.push_back(raw.teachers()[t].id);
    blocks.push_back({{"id", b.block.id},
                      {"kind", std::string(to_string(b.kind))},
                      {"members", members},
                      {"classes", classes},
                      {"teachers", teachers}});
  }
  ojson summary = ojson::object();
  for (const auto& [kind, row] : summarize_detection(raw, res.blocks).by_kind) {
    summary[std::string(to_string(kind))] = {{"planted_hours", row.planted_hours},
                                             {"detected_hours", row.detected_hours},
                                             {"planted_blocks", row.planted_blocks},
                                             {"detected_blocks", row.detected_blocks}};
  }
  ojson doc = {{"lessons_before", raw.lesson_count()},
               {"lessons_after", res.instance.lesson_count()},
               {"blocks", blocks},
               {"planted", summary}};
  return doc.dump(1) + "\n";
}

std::string schedule_json(const Instance& inst, const ScheduleState& s) {
  ojson doc = ojson::object();
  for (LessonIndex l = 0; l < inst.lesson_count(); ++l) {
    const Placement q = s.placement(l);
    doc[inst.lesson(l).id] = q ? *q : -1;
  }
  return doc.dump(1) + "\n";
}

std::vector<Placement> parse_schedule(const Instance& inst, std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text.begin(), text.end());
  } catch (const ojson::parse_error& e) {
    throw InstanceError("schedule syntax error at byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw InstanceError("schedule must be a JSON object of lesson id -> period");
  std::vector<Placement> q(inst.lesson_count(), kUnscheduled);
  std::vector<bool> seen(inst.lesson_count(), false);
  for (const auto& [id, value] : doc.items()) {
    const auto l = inst.find_lesson(id);
    if (!l) throw InstanceError("schedule names unknown lesson '" + id + "'");
    if (!value.is_number_integer()) throw InstanceError("period of lesson '" + id + "' is not an integer");
    const int p = value.get<int>();
    if (p >= 0) q[*l] = p;
    seen[*l] = true;
  }
  for (LessonIndex l = 0; l < inst.lesson_count(); ++l) {
    if (!seen[l]) throw InstanceError("schedule is missing lesson '" + inst.lesson(l).id + "'");
  }
  return q;
}

std::string class_grid_csv(const Instance& inst, const ScheduleState& s) { return grid_csv(inst, s, true); }
std::string teacher_grid_csv(const Instance& inst, const ScheduleState& s) { return grid_csv(inst, s, false); }

RunReport run_solve(const std::string& instance_path, const SolverConfig& cfg, const std::string& out_dir) {
  const Instance raw = load_instance(instance_path);
  const Prepared prep = prepare(raw);
  SolveOutcome out = solve_prepared(prep, cfg, stem_of(instance_path));

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_text_file((dir / "instance.blocked.json").string(), serialize_instance(prep.instance));
  write_text_file((dir / "schedule.json").string(), schedule_json(prep.instance, out.best));
  write_text_file((dir / "class_grid.csv").string(), class_grid_csv(prep.instance, out.best));
  write_text_file((dir / "teacher_grid.csv").string(), teacher_grid_csv(prep.instance, out.best));
  write_text_file((dir / "trace.csv").string(), trace_csv(out.report.trace));
  write_text_file((dir / "report.json").string(), out.report.to_json());
  write_text_file((dir / "timing.json").string(),
                  ojson{{"wall_seconds", out.report.wall_seconds}}.dump(1) + "\n");
  return std::move(out.report);
}

Evaluation evaluate_schedule(const Instance& raw, std::string_view schedule_text) {
  auto score = [&](Instance inst, bool blocked) {
    const auto q = parse_schedule(inst, schedule_text);
    Evaluation ev{std::move(inst), blocked, {}, {}};
    ev.hard = audit_hard(ev.instance, q);
    if (ev.hard.clean()) ev.cost = total_cost(ev.instance, state_from_assignment(ev.instance, q));
    return ev;
  };
  try {
    return score(raw, false);
  } catch (const InstanceError&) {
    return score(detect_blocks(raw).instance, true);
  }
}

ExperimentResult run_experiment(const std::vector<Instance>& instances, const std::vector<std::string>& names,
                                const std::vector<std::uint64_t>& seeds, const std::vector<Variant>& variants,
                                const ExperimentOptions& opts) {
  std::vector<Prepared> prepared;
  prepared.reserve(instances.size());
  for (const auto& inst : instances) prepared.push_back(prepare(inst));

  struct Job {
    std::size_t instance;
    Variant variant;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (Variant v : variants) {
      for (auto seed : seeds) jobs.push_back({i, v, seed});
    }
  }

  std::vector<SolveOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      SolverConfig cfg = opts.base;
      cfg.variant = jobs[k].variant;
      cfg.seed = jobs[k].seed;
      outcomes[k] = solve_prepared(prepared[jobs[k].instance], cfg, names[jobs[k].instance]);
    }
  };
  const int threads = std::max(1, std::min<int>(opts.jobs, static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentResult result;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const RunReport& r = outcomes[k].report;
    if (result.summary.empty() || result.summary.back().instance_name != r.instance_name ||
        result.summary.back().variant != r.variant) {
      result.summary.push_back({r.instance_name, r.variant, 0, 0, 0, 0.0});
    }
    auto& row = result.summary.back();
    ++row.runs;
    row.initial_sum += r.initial.total;
    row.final_sum += r.final_cost.total;
    row.improvement_sum += r.improvement;
  }

  if (!opts.out_dir.empty()) {
    const fs::path dir(opts.out_dir);
    fs::create_directories(dir / "runs");
    std::ostringstream runs_csv;
    runs_csv << "instance,variant,seed,initial_total,final_f1,final_f2,final_f3,final_f4,final_f5,final_total,"
                "improvement_percent,wall_seconds\n";
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const RunReport& r = outcomes[k].report;
      const std::string tag = r.instance_name + "_" + std::string(to_string(r.variant)) + "_s" +
                              std::to_string(r.seed);
      const Instance& inst = prepared[jobs[k].instance].instance;
      write_text_file((dir / "runs" / (tag + "_report.json")).string(), r.to_json());
      write_text_file((dir / "runs" / (tag + "_trace.csv")).string(), trace_csv(r.trace));
      write_text_file((dir / "runs" / (tag + "_schedule.json")).string(), schedule_json(inst, outcomes[k].best));
      runs_csv << r.instance_name << ',' << to_string(r.variant) << ',' << r.seed << ',' << r.initial.total << ','
               << r.final_cost.f1 << ',' << r.final_cost.f2 << ',' << r.final_cost.f3 << ',' << r.final_cost.f4
               << ',' << r.final_cost.f5 << ',' << r.final_cost.total << ',' << std::fixed
               << std::setprecision(2) << r.improvement << ',' << std::setprecision(3) << r.wall_seconds
               << '\n';
      runs_csv.unsetf(std::ios::floatfield);
    }
    write_text_file((dir / "runs.csv").string(), runs_csv.str());
    write_text_file((dir / "summary.csv").string(), summary_csv(result.summary));
    write_text_file((dir / "summary.txt").string(), summary_text(result.summary));
  }

  result.reports.reserve(outcomes.size());
  for (auto& o : outcomes) result.reports.push_back(std::move(o.report));
  return result;
}

ExperimentResult run_experiment(const std::vector<std::string>& instance_paths,
                                const std::vector<std::uint64_t>& seeds, const std::vector<Variant>& variants,
                                const ExperimentOptions& opts) {
  std::vector<Instance> instances;
  std::vector<std::string> names;
  for (const auto& path : instance_paths) {
    instances.push_back(load_instance(path));
    names.push_back(stem_of(path));
  }
  return run_experiment(instances, names, seeds, variants, opts);
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "instance,variant,runs,mean_initial,mean_final,mean_improvement_percent\n";
  out << std::fixed;
  for (const auto& r : rows) {
    out << r.instance_name << ',' << to_string(r.variant) << ',' << r.runs << ',' << std::setprecision(2)
        << r.mean_initial() << ',' << r.mean_final() << ',' << r.mean_improvement() << '\n';
  }
  return out.str();
}

std::string summary_text(const std::vector<SummaryRow>& rows) {
  std::size_t width = 8;
  for (const auto& r : rows) width = std::max(width, r.instance_name.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "instance" << "  " << std::setw(7) << "variant"
      << std::right << std::setw(6) << "runs" << std::setw(14) << "initial" << std::setw(14) << "mean F(Q)"
      << std::setw(8) << "%IMP" << '\n';
  out << std::fixed;
  for (const auto& r : rows) {
    std::string variant(to_string(r.variant));
    for (auto& ch : variant) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    out << std::left << std::setw(static_cast<int>(width)) << r.instance_name << "  " << std::setw(7) << variant
        << std::right << std::setw(6) << r.runs << std::setprecision(1) << std::setw(14) << r.mean_initial()
        << std::setw(14) << r.mean_final() << std::setw(8) << r.mean_improvement() << '\n';
  }
  return out.str();
}

}  // namespace hstt
