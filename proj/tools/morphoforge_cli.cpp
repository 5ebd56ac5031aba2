// morphoforge command-line entry point.
//
//   morphoforge optimize    --scenario target-wide --evaluations 2000 --seed 7 --out run/
//   morphoforge evaluate    --scenario target-arm --design Y:0.3,P:0.25,S:0.2,F:0.01,F:0.01,F:0.01
//   morphoforge export-urdf --design O:0.3,S:0.2 --out robot.urdf
//   morphoforge pareto      --archive run/archive.csv --out run2/
//   morphoforge scenarios   [--show target-leg]
//
// Exit codes: 0 success, 2 validation error, 3 IO error, 4 internal invariant violation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "morphoforge/morphoforge.hpp"

namespace fs = std::filesystem;
using namespace morphoforge;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct IkFlags {
  std::optional<int> restarts;
  std::optional<double> lambda;
  std::optional<int> iters;
  std::optional<double> tol;

  void add_to(CLI::App& app) {
    app.add_option("--ik-restarts", restarts, "IK restarts per target");
    app.add_option("--ik-lambda", lambda, "IK damping factor (> 0)");
    app.add_option("--ik-iters", iters, "IK iterations per restart");
    app.add_option("--ik-tol", tol, "IK residual tolerance");
  }

  /// Defaults, then scenario overrides, then flags.
  IkConfig resolve(const Scenario& s) const {
    IkConfig cfg = s.ik.apply(IkConfig{});
    if (restarts) cfg.restarts = *restarts;
    if (lambda) cfg.damping = *lambda;
    if (iters) cfg.max_iterations = *iters;
    if (tol) cfg.residual_tolerance = *tol;
    cfg.validate();
    return cfg;
  }
};

std::string default_out_dir() {
  if (const char* env = std::getenv("MORPHOFORGE_OUT"); env != nullptr && *env != '\0') return env;
  return "morphoforge_out";
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (f == nullptr) throw IoError(path.string(), "cannot open for writing");
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw IoError(path.string(), "write failed");
}

std::string gnuplot_script() {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel 'E_task'\n"
         "set ylabel 'E_design'\n"
         "set logscale x\n"
         "plot 'archive.csv' using 2:3 with points pt 7 ps 0.3 lc rgb '#9e9e9e' title 'evaluated', \\\n"
         "     'pareto.csv' using 2:3 with points pt 7 ps 0.8 lc rgb '#d62728' title 'pareto'\n";
}

void print_front(const std::vector<ArchiveRecord>& front) {
  std::printf("%8s  %-10s %4s %14s %12s\n", "eval", "joints", "dof", "e_task", "e_design");
  for (const auto& r : front) {
    const auto d = decode_genome(r.genome);
    std::printf("%8zu  %-10s %4zu %14.6g %12.6g\n", r.eval_index, d.joint_string().c_str(), d.dof(),
                r.objectives.task, r.objectives.design);
  }
}

/// Post-run checks on what the engine guarantees.
void check_archive(const ParetoArchive& archive, std::size_t evaluations,
                   const std::vector<ArchiveRecord>& front) {
  if (archive.records.size() != evaluations) {
    throw InvariantError("archive holds " + std::to_string(archive.records.size()) +
                         " records, expected " + std::to_string(evaluations));
  }
  for (std::size_t i = 0; i < archive.records.size(); ++i) {
    if (archive.records[i].eval_index != i) throw InvariantError("evaluation indices not contiguous");
  }
  for (const auto& a : front) {
    for (const auto& b : front) {
      if (dominates(a.objectives, b.objectives)) throw InvariantError("pareto set is self-dominated");
    }
  }
}

void write_pareto_outputs(const ParetoArchive& archive, const fs::path& out) {
  export_pareto(archive, (out / "pareto.csv").string());
  export_pareto_json(archive, (out / "pareto.json").string());
  const fs::path urdf_dir = out / "urdf";
  make_dir(urdf_dir);
  for (const auto& r : extract_pareto(archive)) {
    const auto d = decode_genome(r.genome);
    const std::string name = "pareto_" + std::to_string(r.eval_index) + "_" + d.joint_string();
    write_text(urdf_dir / (name + ".urdf"), export_urdf(d, name));
  }
}

struct OptimizeArgs {
  std::string scenario;
  std::size_t evaluations = 10000;
  std::size_t population = 100;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string out = default_out_dir();
  bool progress = false;
  bool gnuplot = false;
  bool memoize = false;
  IkFlags ik;
};

int cmd_optimize(const OptimizeArgs& args) {
  const Scenario scenario = resolve_scenario(args.scenario);
  OptimizerConfig cfg;
  cfg.population_size = args.population;
  cfg.total_evaluations = args.evaluations;
  cfg.seed = args.seed;
  cfg.workers = args.workers;
  cfg.validate();
  const IkConfig ik = args.ik.resolve(scenario);

  const fs::path out(args.out);
  make_dir(out);

  ProgressSink sink;
  if (args.progress) {
    sink = [](const ProgressEvent& ev) {
      const nlohmann::json line = {{"evaluations", ev.evaluations},
                                   {"best_e_task", ev.best_task},
                                   {"front_size", ev.front_size}};
      std::cerr << line.dump() << std::endl;
    };
  }

  const Evaluator evaluator(scenario, ik, cfg.seed, args.memoize);
  ParetoArchive archive = run(evaluator, scenario.n_modules, cfg, sink);
  archive.scenario_name = scenario.name;
  archive.config["ik"] = {{"damping", ik.damping},
                          {"max_iterations", ik.max_iterations},
                          {"step_tolerance", ik.step_tolerance},
                          {"residual_tolerance", ik.residual_tolerance},
                          {"restarts", ik.restarts}};

  const auto front = extract_pareto(archive);
  check_archive(archive, cfg.total_evaluations, front);

  export_csv(archive, (out / "archive.csv").string());
  write_pareto_outputs(archive, out);
  if (args.gnuplot) write_text(out / "plot.gp", gnuplot_script());

  std::printf("scenario %s, %zu evaluations, seed %llu, %zu pareto solutions\n",
              scenario.name.c_str(), archive.records.size(),
              static_cast<unsigned long long>(cfg.seed), front.size());
  print_front(front);
  return 0;
}

struct EvaluateArgs {
  std::string design;
  std::string scenario;
  std::uint64_t seed = 0;
  IkFlags ik;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const RobotDesign d = parse_design(args.design);
  const Scenario scenario = resolve_scenario(args.scenario);
  IkConfig ik = args.ik.resolve(scenario);
  ik.seed = ik_seed_for(args.seed, encode_design(d));

  const auto task = eval_task(d, scenario, ik);
  const auto cost = eval_design(d);

  std::printf("design    %s  (dof %zu)\n", d.joint_string().c_str(), d.dof());
  std::printf("scenario  %s  (%zu targets)\n", scenario.name.c_str(), scenario.targets.size());
  std::printf("e_task    %.9g\n", task.e_task);
  std::printf("e_design  %.9g  (joint %d + length %.9g)\n", cost.e_design, cost.joint, cost.length);
  for (std::size_t i = 0; i < task.solutions.size(); ++i) {
    const auto& s = task.solutions[i];
    std::printf("target %zu  residual %.9g  %s  q = [", i, s.residual_norm,
                s.converged ? "converged" : "not converged");
    for (Eigen::Index k = 0; k < s.q.size(); ++k) std::printf(k ? ", %.6f" : "%.6f", s.q[k]);
    std::printf("]\n");
  }
  return 0;
}

int cmd_export_urdf(const std::string& design, const std::string& path, const std::string& name) {
  const RobotDesign d = parse_design(design);
  write_text(path, export_urdf(d, name));
  std::printf("wrote %s  dof %zu  total length %.9g m\n", path.c_str(), d.dof(), d.total_length());
  return 0;
}

int cmd_pareto(const std::string& archive_path, const std::string& out_dir) {
  ParetoArchive archive;
  archive.records = read_archive_csv(archive_path);
  if (archive.records.empty()) throw ValidationError(archive_path + ": archive is empty");
  assign_archive_ranks(archive);
  const fs::path out(out_dir);
  make_dir(out);
  write_pareto_outputs(archive, out);
  print_front(extract_pareto(archive));
  return 0;
}

int cmd_scenarios(const std::string& show) {
  if (!show.empty()) {
    std::cout << scenario_to_json(resolve_scenario(show));
    return 0;
  }
  for (const auto& s : builtin_scenarios()) {
    std::printf("%-12s %zu targets, %zu modules\n", s.name.c_str(), s.targets.size(), s.n_modules);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design serial robots from rotational and prismatic joint modules"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Run NSGA-II and export the archive and Pareto set");
  optimize->add_option("--scenario", opt.scenario, "Builtin scenario name or scenario file")->required();
  optimize->add_option("--evaluations", opt.evaluations, "Total objective evaluations");
  optimize->add_option("--population", opt.population, "Population size (even)");
  optimize->add_option("--seed", opt.seed, "Run seed");
  optimize->add_option("--workers", opt.workers, "Evaluation threads (results do not depend on it)");
  optimize->add_option("--out", opt.out, "Output directory (default $MORPHOFORGE_OUT)");
  optimize->add_flag("--progress", opt.progress, "Stream JSON progress lines to stderr");
  optimize->add_flag("--gnuplot", opt.gnuplot, "Also write plot.gp");
  optimize->add_flag("--memoize", opt.memoize, "Cache evaluations of repeated genomes");
  opt.ik.add_to(*optimize);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one design against a scenario");
  evaluate->add_option("--design", ev.design, "KIND:LENGTH,... e.g. Y:0.3,P:0.25,S:0.2")->required();
  evaluate->add_option("--scenario", ev.scenario, "Builtin scenario name or scenario file")->required();
  evaluate->add_option("--seed", ev.seed, "Seed for IK restarts");
  ev.ik.add_to(*evaluate);

  std::string urdf_design, urdf_out, urdf_name = "morphoforge_robot";
  auto* urdf = app.add_subcommand("export-urdf", "Write the URDF of one design");
  urdf->add_option("--design", urdf_design, "KIND:LENGTH,...")->required();
  urdf->add_option("--out", urdf_out, "Output .urdf path")->required();
  urdf->add_option("--name", urdf_name, "Robot name");

  std::string pareto_archive, pareto_out = default_out_dir();
  auto* pareto = app.add_subcommand("pareto", "Extract the Pareto set of an archive.csv");
  pareto->add_option("--archive", pareto_archive, "archive.csv from a previous run")->required();
  pareto->add_option("--out", pareto_out, "Output directory");

  std::string show;
  auto* scenarios = app.add_subcommand("scenarios", "List builtin scenarios");
  scenarios->add_option("--show", show, "Print one scenario as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*optimize) return cmd_optimize(opt);
    if (*evaluate) return cmd_evaluate(ev);
    if (*urdf) return cmd_export_urdf(urdf_design, urdf_out, urdf_name);
    if (*pareto) return cmd_pareto(pareto_archive, pareto_out);
    if (*scenarios) return cmd_scenarios(show);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
