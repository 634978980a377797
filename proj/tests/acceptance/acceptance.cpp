// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "../unit/dense_oracle.hpp"
#include "../unit/helpers.hpp"
#include "CLI11.hpp"
#include "pfb/benchmark_runner.hpp"
#include "pfb/config.hpp"
#include "pfb/errors.hpp"
#include "pfb/output.hpp"
#include "pfb/sparse_lu.hpp"
#include "pfb/transport.hpp"

using namespace pfb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double metric(const BenchmarkRun& run, const char* name) {
  return run.summary["metrics"][name].get<double>();
}

RunOptions flow_only() {
  RunOptions o;
  o.run_transport = false;
  return o;
}

void add_checks(Outcome& out, const std::vector<Check>& checks) {
  for (const Check& c : checks) out.require(c.passed, c.name + " " + num(c.value) + " vs " + num(c.threshold));
}

Outcome local_conservation() {
  Outcome out;
  const BenchmarkRun run = run_benchmark(multilayer(), Formulation::rt0, flow_only());
  out.require(run.mesh->num_nodes() == 441, "nodes " + std::to_string(run.mesh->num_nodes()));
  const double v = metric(run, "local_balance");
  out.require(v <= 1e-10, "max element imbalance / flux scale " + num(v));
  return out;
}

Outcome multilayer_exactness() {
  Outcome out;
  const BenchmarkRun rt0 = run_benchmark(multilayer(), Formulation::rt0, flow_only());
  const BenchmarkRun vms = run_benchmark(multilayer(), Formulation::vms, flow_only());
  const double a = metric(rt0, "centerline_max_relative_deviation");
  const double b = metric(vms, "centerline_max_relative_deviation");
  out.require(a <= 1e-6, "rt0 centerline deviation " + num(a));
  out.require(b >= 1e3 * a && b > 0.0, "vms centerline deviation " + num(b));
  // Layer velocities read off the RT0 centerline profile.
  std::vector<double> seen;
  for (const auto& row : rt0.centerline.rows) {
    if (seen.empty() || std::abs(row[2] - seen.back()) > 1e-12) seen.push_back(row[2]);
  }
  std::string layers;
  for (double v : seen) layers += (layers.empty() ? "" : " ") + num(v);
  const std::vector<double> expected{1.0, 5.0, 0.5, 3.0, 8.0};
  bool match = seen.size() == expected.size();
  for (std::size_t i = 0; match && i < seen.size(); ++i) match = std::abs(seen[i] - expected[i]) <= 1e-12 * expected[i];
  out.require(match, "layer velocities " + layers);
  return out;
}

Outcome global_conservation() {
  Outcome out;
  for (const BenchmarkSpec& s : {multilayer(), cylinder_inclusion(), leaky_well()}) {
    const BenchmarkRun run = run_benchmark(s, Formulation::vms, flow_only());
    const double v = metric(run, "global_balance");
    out.require(v <= 1e-8, s.name + " " + num(v));
  }
  return out;
}

Outcome convergence() {
  Outcome out;
  for (Formulation f : {Formulation::rt0, Formulation::vms}) {
    const ConvergenceStudy s = convergence_study(f);
    out.require(s.rows.size() == 4, std::string(to_string(f)) + " levels " + std::to_string(s.rows.size()));
    out.require(s.passed(), std::string(to_string(f)) + " velocity rate " + num(s.velocity_rate) +
                                ", pressure rate " + num(s.pressure_rate));
  }
  return out;
}

Outcome cylinder(const fs::path& dir) {
  Outcome out;
  RunOptions o;
  o.output_dir = (dir / "cylinder_sweep").string();
  const CylinderSweep s = cylinder_sweep({1e-11, 1e-9, 1e-7, 1e-5, 1e-3}, o);
  const Mesh mesh = build_mesh(cylinder_inclusion());
  out.require(std::abs(mesh.num_triangles() - 912) <= 100, "elements " + std::to_string(mesh.num_triangles()));
  add_checks(out, s.checks);
  return out;
}

Outcome leaky(const fs::path& dir) {
  Outcome out;
  RunOptions o;
  o.output_dir = (dir / "leaky_well_study").string();
  const LeakyWellStudy s = leaky_well_study({0.0, 1e-10, 1e-9}, o);
  out.require(true, "gap " + num(s.gap));
  add_checks(out, s.checks);
  return out;
}

Outcome dof_accounting() {
  Outcome out;
  for (int n : {1, 5, 20, 37}) {
    const Mesh m = generate_structured(n, n + 3, test::kUnitSquare);
    const bool ok = dof_counts(m, Formulation::rt0) == m.num_edges() + m.num_triangles() &&
                    dof_counts(m, Formulation::vms) == 3 * m.num_nodes();
    out.require(ok, std::to_string(n) + "x" + std::to_string(n + 3));
  }
  const Mesh m = build_mesh(multilayer());
  const double ratio = static_cast<double>(dof_counts(m, Formulation::vms)) / dof_counts(m, Formulation::rt0);
  out.require(std::abs(ratio - 0.65) <= 0.05, "vms/rt0 ratio " + num(ratio));
  return out;
}

Outcome suites(const fs::path& dir) {
  Outcome out;
  {
    std::mt19937 rng(977);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const test::Dense a = test::random_matrix(rng, trial % 2);
      std::vector<double> b(a.size());
      for (double& v : b) v = u(rng);
      const auto expected = test::dense_solve(a, b);
      const auto x = SparseLu(test::to_csr(a)).solve(b);
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        err = std::max(err, std::abs(x[i] - expected[i]));
        scale = std::max(scale, std::abs(expected[i]));
      }
      worst = std::max(worst, err / scale);
    }
    out.require(worst <= 1e-10, "linalg vs dense " + num(worst));
  }
  {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto mesh = test::unit_mesh(4 + trial);
        std::vector<double> dofs(dof_count(*mesh, f));
        for (double& d : dofs) d = u(rng);
        const FlowSolution s(f, mesh, dofs);
        const MassBalanceReport r = element_mass_balance(s, [](Point x) { return x.x * x.y; });
        worst = std::max(worst, std::abs(r.sum_elements - r.global) / r.flux_scale);
      }
    }
    out.require(worst <= 1e-12, "telescoping " + num(worst));
  }
  {
    double worst = 0.0;
    const auto mesh = test::unit_mesh(10);
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      const FlowSolution flow = solve_flow(test::linear_pressure_problem(mesh, f));
      TransportProblem p;
      p.mesh = mesh;
      p.diffusivity = 0.01;
      p.dt = 0.05;
      p.t_end = 2.0;
      p.initial = [](Point) { return 1.0; };
      p.boundary["left"] = TransportBoundaryCondition::dirichlet([](Point) { return 1.0; });
      for (const char* side : {"right", "bottom", "top"}) p.boundary[side] = TransportBoundaryCondition::zero_flux();
      TransientOptions opt;
      opt.steady_tolerance = 0.0;
      const TransientResult r = run_transient(p, flow, opt);
      for (double c : r.snapshots.back().c) worst = std::max(worst, std::abs(c - 1.0));
    }
    out.require(worst <= 1e-12, "constant state " + num(worst));
  }
  {
    FlowProblem p = test::linear_pressure_problem(test::unit_mesh(4), Formulation::rt0);
    p.source = [](Point) { return 1.0; };
    for (const char* side : {"left", "right", "bottom", "top"}) p.boundary[side] = FlowBoundaryCondition::no_flow();
    bool rejected = false;
    try {
      solve_flow(p);
    } catch (const IncompatibleDataError&) {
      rejected = true;
    }
    out.require(rejected, "incompatible data rejected");
  }
  {
    const std::string data = PFB_TEST_DATA;
    const fs::path golden = dir / "golden";
    fs::create_directories(golden);
    const Mesh two({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}, {1, 2});
    const std::vector<VtkField> fields{{"c", FieldLocation::point, 1, {0.5, 0.5, 0.5, 0.5}},
                                       {"region", FieldLocation::cell, 1, {1, 2}},
                                       {"velocity", FieldLocation::cell, 2, {0.1, -2, 0.1, -2}}};
    bool same = true;
    for (int k = 0; k < 2; ++k) {
      const std::string tag = std::to_string(k);
      write_vtk(two, fields, (golden / ("two_triangles_" + tag + ".vtk")).string(), "two triangles");
      write_text((golden / ("resolved_" + tag + ".json")).string(),
                 format_config(parse_config(data + "/multilayer_config.json")));
    }
    for (const char* f : {"two_triangles", "resolved"}) {
      const std::string ext = std::string(f) == "resolved" ? ".json" : ".vtk";
      const std::string ref = std::string(f) == "resolved" ? "multilayer_resolved.json" : "two_triangles.vtk";
      const std::string a = slurp(golden / (std::string(f) + "_0" + ext));
      same = same && a == slurp(golden / (std::string(f) + "_1" + ext)) && a == slurp(fs::path(data) / ref);
    }
    out.require(same, "config and VTK golden files");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string output_dir = "acceptance_output";
  app.add_option("--output-dir", output_dir, "directory for benchmark outputs");
  CLI11_PARSE(app, argc, argv);
  const fs::path dir(output_dir);
  fs::create_directories(dir);

  struct Criterion {
    int id;
    std::string name;
    double budget;  // seconds; 0 means no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "RT0 local conservation", 5, local_conservation},
      {2, "multilayer exactness", 0, multilayer_exactness},
      {3, "VMS global conservation", 0, global_conservation},
      {4, "convergence rates", 60, convergence},
      {5, "cylinder inclusion sweep", 600, [&] { return cylinder(dir); }},
      {6, "leaky well", 900, [&] { return leaky(dir); }},
      {7, "unknown accounting", 0, dof_accounting},
      {8, "solver and property suites", 0, [&] { return suites(dir); }},
  };

  bool all = true;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0) out.require(seconds < c.budget, "runtime " + num(seconds) + " s < " + num(c.budget) + " s");
    all = all && out.passed;
    std::printf("%s criterion %d %s: %s (%.1f s)\n", out.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
