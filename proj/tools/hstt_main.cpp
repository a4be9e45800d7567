// hstt: generate instances, detect blocks, solve, run experiments, evaluate exports.

#include <glob.h>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hstt/block_detector.hpp"
#include "hstt/generator.hpp"
#include "hstt/harness.hpp"
#include "json.hpp"

namespace {

using namespace hstt;

constexpr int kInputError = 1;
constexpr int kUnsatisfiable = 2;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t a = std::stoull(text.substr(0, dots));
    const std::uint64_t b = std::stoull(text.substr(dots + 2));
    if (b < a) throw std::invalid_argument("empty seed range " + text);
    for (auto s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) seeds.push_back(std::stoull(item));
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

std::vector<Variant> parse_variants(const std::string& text) {
  std::vector<Variant> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(variant_from_string(item));
  if (out.empty()) throw std::invalid_argument("no variants given");
  return out;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  std::vector<std::string> out;
  glob_t g{};
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (out.empty()) throw InstanceError("no instance files match '" + pattern + "'");
  return out;
}

struct SolverFlags {
  int iterations = 3000;
  int div_activation = 20;
  int iterations_div = 5;
  int intra_activation = 40;
  std::vector<std::int64_t> weights;

  void attach(CLI::App* app) {
    app->add_option("--iterations", iterations, "tabu iterations")->capture_default_str();
    app->add_option("--div-activation", div_activation, "non-improving iterations before the penalty turns on")
        ->capture_default_str();
    app->add_option("--iterations-div", iterations_div, "penalty window length")->capture_default_str();
    app->add_option("--intra-activation", intra_activation, "non-improving iterations before intra moves")
        ->capture_default_str();
    app->add_option("--weights", weights, "w1,w2,w3,w4,w5")->delimiter(',')->expected(5);
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.iterations = iterations;
    cfg.div_activation = div_activation;
    cfg.iterations_div = iterations_div;
    cfg.intra_activation = intra_activation;
    if (!weights.empty()) cfg.weights = Weights{weights[0], weights[1], weights[2], weights[3], weights[4]};
    cfg.validate();
    return cfg;
  }
};

void print_cost(std::ostream& out, const std::string& label, const CostBreakdown& c) {
  out << label << ": F=" << c.total << " (f1=" << c.f1 << " f2=" << c.f2 << " f3=" << c.f3 << " f4=" << c.f4
      << " f5=" << c.f5 << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-school timetabling with block detection and tabu search"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a synthetic instance from a JSON spec");
  std::string spec_path, gen_out;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--spec", spec_path, "generator spec (JSON)")->required();
  gen->add_option("--seed", gen_seed, "overrides the spec seed");
  gen->add_option("--out", gen_out, "instance file to write")->required();

  auto* det = app.add_subcommand("detect-blocks", "detect half switches, loops and chains");
  std::string det_instance, det_out;
  det->add_option("--instance", det_instance)->required();
  det->add_option("--out", det_out, "write the block-substituted instance here");

  auto* solve = app.add_subcommand("solve", "detect blocks, construct and improve a timetable");
  std::string solve_instance, solve_variant = "tsdi", solve_out;
  std::uint64_t solve_seed = 1;
  SolverFlags solve_flags;
  solve->add_option("--instance", solve_instance)->required();
  solve->add_option("--variant", solve_variant, "ts, tsi, tsd or tsdi")->capture_default_str();
  solve->add_option("--seed", solve_seed)->capture_default_str();
  solve->add_option("--out", solve_out, "output directory")->required();
  solve_flags.attach(solve);

  auto* exp = app.add_subcommand("experiment", "run every (instance, variant, seed) and summarize");
  std::string exp_instances, exp_seeds = "1..10", exp_variants = "ts,tsi,tsd,tsdi", exp_out;
  int exp_jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  SolverFlags exp_flags;
  exp->add_option("--instances", exp_instances, "glob of instance files")->required();
  exp->add_option("--seeds", exp_seeds, "a..b or a comma list")->capture_default_str();
  exp->add_option("--variants", exp_variants)->capture_default_str();
  exp->add_option("--out", exp_out, "output directory")->required();
  exp->add_option("--jobs", exp_jobs, "worker threads");
  exp_flags.attach(exp);

  auto* eval = app.add_subcommand("evaluate", "audit and score a schedule export");
  std::string eval_instance, eval_schedule;
  eval->add_option("--instance", eval_instance)->required();
  eval->add_option("--schedule", eval_schedule)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*gen) {
      GenSpec spec = parse_gen_spec(read_text_file(spec_path));
      if (gen_seed) spec.seed = *gen_seed;
      const Instance inst = generate_instance(spec);
      write_text_file(gen_out, serialize_instance(inst));
      std::cout << "lessons " << inst.lesson_count() << ", #a " << inst.available_pair_count() << ", sr "
                << std::fixed << std::setprecision(2) << sparseness(inst) << "\n";
    } else if (*det) {
      const Instance inst = load_instance(det_instance);
      const DetectionResult res = detect_blocks(inst);
      std::cout << detection_report_json(inst, res);
      if (!det_out.empty()) write_text_file(det_out, serialize_instance(res.instance));
    } else if (*solve) {
      SolverConfig cfg = solve_flags.config();
      cfg.variant = variant_from_string(solve_variant);
      cfg.seed = solve_seed;
      const RunReport r = run_solve(solve_instance, cfg, solve_out);
      print_cost(std::cout, "initial", r.initial);
      print_cost(std::cout, "final", r.final_cost);
      std::cout << std::fixed << std::setprecision(2) << "improvement " << r.improvement << "%, "
                << std::setprecision(3) << r.wall_seconds << " s\n";
    } else if (*exp) {
      ExperimentOptions opts;
      opts.base = exp_flags.config();
      opts.jobs = exp_jobs;
      opts.out_dir = exp_out;
      const auto result =
          run_experiment(expand_glob(exp_instances), parse_seeds(exp_seeds), parse_variants(exp_variants), opts);
      std::cout << summary_text(result.summary);
    } else if (*eval) {
      const Instance inst = load_instance(eval_instance);
      const Evaluation ev = evaluate_schedule(inst, read_text_file(eval_schedule));
      std::cout << "hard violations: conflicts " << ev.hard.conflict_count << ", availability "
                << ev.hard.availability_count << "\n";
      if (ev.blocks_applied) std::cout << "matched against the block-detected instance\n";
      if (!ev.hard.clean()) return kInputError;
      print_cost(std::cout, "cost", ev.cost);
    }
  } catch (const UnsatisfiableSpec& e) {
    std::cerr << "unsatisfiable spec: " << e.what() << "\n";
    return kUnsatisfiable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return 0;
}
