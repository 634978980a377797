// pfb: run Darcy flow and transport benchmarks from the command line.
//
// Exit codes: 0 all checks passed, 1 a benchmark threshold failed,
// 2 usage, configuration or solver error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pfb/benchmark_runner.hpp"
#include "pfb/config.hpp"
#include "pfb/errors.hpp"
#include "pfb/output.hpp"

namespace {

using namespace pfb;
using Clock = std::chrono::steady_clock;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Wall-clock information lives only here, never in the data files.
void append_run_log(const std::string& dir, const std::string& what, double seconds) {
  std::filesystem::create_directories(dir);
  std::ofstream log(dir + "/run.log", std::ios::app);
  const std::time_t now = std::time(nullptr);
  log << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ") << " " << what << " " << std::fixed
      << std::setprecision(3) << seconds << " s\n";
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int report(const nlohmann::json& summary, bool passed) {
  std::cout << summary.dump(2) << "\n";
  return passed ? kPass : kFail;
}

int run_config(const std::string& path) {
  const RunConfig config = parse_config(path);
  const RunOptions options = run_options(config);
  const auto start = Clock::now();
  const BenchmarkRun run = run_benchmark(effective_spec(config), config.formulation, options);
  append_run_log(options.output_dir, "run " + path, seconds_since(start));
  return report(run.summary, run.passed());
}

struct BenchArgs {
  std::string name;
  std::string formulation = "rt0";
  std::optional<double> beta;
  std::optional<double> k2;
  int mesh_scale = 1;
  std::string output_dir;
};

int run_bench(const BenchArgs& a) {
  const Formulation f = parse_formulation(a.formulation);
  RunOptions options;
  const std::string root = output_root(a.output_dir);
  const auto start = Clock::now();
  if (a.name == "cylinder_sweep") {
    options.output_dir = root + "/cylinder_sweep";
    const CylinderSweep s =
        cylinder_sweep({1e-11, 1e-9, 1e-7, 1e-5, 1e-3}, options, 0.02, 1e-10, a.mesh_scale);
    append_run_log(options.output_dir, "bench cylinder_sweep", seconds_since(start));
    return report(s.summary, s.passed());
  }
  if (a.name == "leaky_well_study") {
    options.output_dir = root + "/leaky_well_study";
    const LeakyWellStudy s = leaky_well_study({0.0, 1e-10, 1e-9}, options, 0.10, 0.07, a.mesh_scale);
    append_run_log(options.output_dir, "bench leaky_well_study", seconds_since(start));
    return report(s.summary, s.passed());
  }
  BenchmarkSpec spec;
  if (a.name == "leaky_well") {
    spec = leaky_well(a.beta.value_or(0.0));
  } else if (a.name == "cylinder_inclusion") {
    spec = cylinder_inclusion(a.k2.value_or(1e-7));
  } else {
    spec = builtin_benchmark(a.name);
  }
  if (a.beta && a.name != "leaky_well") {
    spec.materials.beta = *a.beta;
  }
  spec.mesh.scale = a.mesh_scale;
  options.output_dir = root + "/" + spec.name + "_" + a.formulation;
  const BenchmarkRun run = run_benchmark(spec, f, options);
  append_run_log(options.output_dir, "bench " + a.name, seconds_since(start));
  return report(run.summary, run.passed());
}

int run_converge(const std::string& formulation) {
  const ConvergenceStudy s = convergence_study(parse_formulation(formulation));
  return report(s.summary, s.passed());
}

int run_check(const std::string& path, bool resolved) {
  const RunConfig config = parse_config(path);
  if (resolved) {
    std::cout << format_config(config);
    return kPass;
  }
  std::cout << "config ok: " << config.spec.name << " (" << to_string(config.formulation) << ")\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Porous flow benchmarks: RT0 and VMS Darcy solvers with P1 transport"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the problem described by a JSON config");
  run->add_option("config", config_path, "Config file")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run a builtin benchmark or study");
  std::vector<std::string> names = builtin_benchmark_names();
  names.push_back("cylinder_sweep");
  names.push_back("leaky_well_study");
  bench->add_option("name", bench_args.name, "Benchmark name")->required()->check(CLI::IsMember(names));
  bench->add_option("--formulation", bench_args.formulation, "rt0 or vms")
      ->check(CLI::IsMember({"rt0", "vms"}));
  bench->add_option("--beta", bench_args.beta, "Barus exponent (1/Pa)")->check(CLI::NonNegativeNumber);
  bench->add_option("--k2", bench_args.k2, "Inclusion permeability for cylinder_inclusion")
      ->check(CLI::PositiveNumber);
  bench->add_option("--mesh-scale", bench_args.mesh_scale, "Uniform refinement factor")
      ->check(CLI::Range(1, 64));
  bench->add_option("--output-dir", bench_args.output_dir, "Output root (default $PFB_OUTPUT_DIR)");

  std::string converge_formulation;
  auto* converge = app.add_subcommand("converge", "Manufactured-solution convergence study");
  converge->add_option("formulation", converge_formulation, "rt0 or vms")
      ->required()
      ->check(CLI::IsMember({"rt0", "vms"}));

  std::string check_path;
  auto* check = app.add_subcommand("check", "Validate a config without solving");
  check->add_option("config", check_path, "Config file")->required();
  bool resolved = false;
  check->add_flag("--resolved", resolved, "Print the resolved config instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return run_config(config_path);
    if (*bench) return run_bench(bench_args);
    if (*converge) return run_converge(converge_formulation);
    if (*check) return run_check(check_path, resolved);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
