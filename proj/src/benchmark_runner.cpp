#include "pfb/benchmark_runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "pfb/errors.hpp"
#include "pfb/output.hpp"

namespace pfb {

using nlohmann::json;

namespace {

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

std::string padded(int value, int width) {
  std::string s = std::to_string(value);
  return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

const BoundarySpec* find_boundary(const std::vector<BoundarySpec>& list, const std::string& tag) {
  for (const auto& b : list) {
    if (b.tag == tag) return &b;
  }
  return nullptr;
}

// Layered Darcy velocity k / mu * (p_left - p_right) / width at a point.
double layered_velocity(const BenchmarkSpec& spec, Point p) {
  const BoundarySpec* left = find_boundary(spec.flow_boundary, "left");
  const BoundarySpec* right = find_boundary(spec.flow_boundary, "right");
  if (!left || !right) throw ConfigurationError("centerline check needs left and right pressures");
  const Rectangle& box = spec.mesh.box;
  int region = spec.default_region;
  for (const auto& r : spec.regions) {
    if (r.shape.contains(p)) {
      region = r.tag;
      break;
    }
  }
  double k = 0.0;
  for (const auto& m : spec.materials.regions) {
    if (m.tag == region) k = m.permeability;
  }
  const double dp = left->value({box.lower.x, p.y}) - right->value({box.upper.x, p.y});
  return k / spec.materials.mu0 * dp / box.width();
}

std::vector<VtkField> flow_fields(const FlowSolution& s, const MassBalanceReport& balance) {
  const Mesh& mesh = s.mesh();
  VtkField pressure{"pressure", FieldLocation::cell, 1, s.element_mean_pressures()};
  VtkField velocity{"velocity", FieldLocation::cell, 2, {}};
  VtkField region{"region", FieldLocation::cell, 1, {}};
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Vec2 v = s.velocity(t, mesh.centroid(t));
    velocity.values.insert(velocity.values.end(), {v.x, v.y});
    region.values.push_back(mesh.triangle(t).region);
  }
  std::vector<VtkField> fields{pressure, velocity, region,
                               {"imbalance", FieldLocation::cell, 1, balance.element},
                               {"imbalance_per_area", FieldLocation::cell, 1, balance.element_normalized}};
  if (s.formulation() == Formulation::vms) {
    VtkField nv{"nodal_velocity", FieldLocation::point, 2, {}};
    VtkField np{"nodal_pressure", FieldLocation::point, 1, {}};
    for (Index v = 0; v < mesh.num_nodes(); ++v) {
      nv.values.insert(nv.values.end(), {s.dofs()[3 * v], s.dofs()[3 * v + 1]});
      np.values.push_back(s.dofs()[3 * v + 2]);
    }
    fields.push_back(nv);
    fields.push_back(np);
  }
  return fields;
}

void write_outputs(const BenchmarkRun& run, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const Mesh& mesh = *run.mesh;
  write_text((fs::path(dir) / "spec.json").string(), format_spec(run.spec));
  write_vtk(mesh, flow_fields(*run.flow, run.balance), (fs::path(dir) / "flow.vtk").string(),
            run.spec.name + " flow " + std::string(to_string(run.formulation)));
  Series balance{{"element", "imbalance", "imbalance_per_area"}, {}};
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    balance.add_row({static_cast<double>(t), run.balance.element[t], run.balance.element_normalized[t]});
  }
  write_series(balance, (fs::path(dir) / "mass_balance.csv").string());
  if (!run.centerline.columns.empty()) {
    write_series(run.centerline, (fs::path(dir) / "centerline.csv").string());
  }
  if (run.transport) {
    write_series(run.transport->series, (fs::path(dir) / "concentration.csv").string());
    for (std::size_t i = 0; i < run.transport->snapshots.size(); ++i) {
      const TransportState& s = run.transport->snapshots[i];
      write_vtk(mesh, {{"concentration", FieldLocation::point, 1, s.c}},
                (fs::path(dir) / ("concentration_" + padded(static_cast<int>(i), 4) + ".vtk")).string(),
                run.spec.name + " concentration t=" + format_double(s.time));
    }
  }
  if (!run.leak.columns.empty()) write_series(run.leak, (fs::path(dir) / "leak_rate.csv").string());
  if (!run.spurious.columns.empty()) {
    write_series(run.spurious, (fs::path(dir) / "spurious_mass.csv").string());
  }
  write_text((fs::path(dir) / "summary.json").string(), run.summary.dump(2) + "\n");
}

}  // namespace

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"passed", c.passed}});
  }
  return out;
}

bool BenchmarkRun::passed() const { return all_passed(checks); }
bool CylinderSweep::passed() const { return all_passed(checks); }
bool LeakyWellStudy::passed() const { return all_passed(checks); }
bool ConvergenceStudy::passed() const { return all_passed(checks); }

BenchmarkRun run_benchmark(const BenchmarkSpec& spec, Formulation formulation,
                           const RunOptions& options) {
  BenchmarkRun run;
  run.spec = spec;
  run.formulation = formulation;
  run.mesh = std::make_shared<const Mesh>(build_mesh(spec));
  const Mesh& mesh = *run.mesh;
  const FlowProblem flow_problem = build_flow_problem(spec, run.mesh, formulation);
  FlowSolveOptions flow_options = options.flow;
  flow_options.relaxation = std::min(flow_options.relaxation, spec.picard_relaxation);
  run.flow = solve_flow(flow_problem, flow_options);
  const FlowSolution& flow = *run.flow;
  run.balance = element_mass_balance(flow, flow_problem.source);
  const double scale = run.balance.flux_scale > 0.0 ? run.balance.flux_scale : 1.0;

  json metrics;
  metrics["local_balance"] = run.balance.max_abs / scale;
  metrics["global_balance"] = std::abs(run.balance.global) / scale;
  metrics["flux_scale"] = run.balance.flux_scale;
  json worst = json::array();
  for (Index t : run.balance.worst) worst.push_back({{"element", t}, {"imbalance", run.balance.element[t]}});
  metrics["worst_elements"] = worst;

  const int count = spec.outputs.centerline_count;
  if (count > 0) {
    PointLocator locator(mesh);
    run.centerline.columns = {"y", "vx", "expected_vx"};
    double deviation = 0.0;
    const Rectangle& box = spec.mesh.box;
    for (int i = 0; i < count; ++i) {
      const Point p{spec.outputs.centerline_x, box.lower.y + (i + 0.5) * box.height() / count};
      const Index t = locator.locate(p);
      if (t == kNoIndex) throw ConfigurationError("centerline leaves the mesh");
      const double vx = flow.velocity(t, p).x;
      const double expected = layered_velocity(spec, p);
      run.centerline.add_row({p.y, vx, expected});
      deviation = std::max(deviation, std::abs(vx - expected) / std::abs(expected));
    }
    metrics["centerline_max_relative_deviation"] = deviation;
  }

  const auto segment = leak_segment_edges(spec, mesh);
  if (options.run_transport && spec.transport.enabled) {
    const TransportProblem tp = build_transport_problem(spec, run.mesh);
    SpuriousMassMeter meter(flow, flow_problem.source);
    run.spurious.columns = {"time", "spurious_mass"};
    if (!segment.empty()) run.leak.columns = {"time", "leak_rate"};
    TransientOptions topt;
    topt.steady_tolerance = spec.transport.steady_tolerance;
    topt.snapshot_every = spec.outputs.snapshot_every;
    topt.probes = spec.outputs.probes;
    topt.execution = options.flow.execution;
    topt.observer = [&](int step, const TransportState& s) {
      if (step > 0) meter.accumulate(s.c, tp.dt);
      run.spurious.add_row({s.time, meter.total()});
      if (!segment.empty()) run.leak.add_row({s.time, leak_rate(s, flow, segment)});
    };
    run.transport = run_transient(tp, flow, topt);
    const auto& rows = run.transport->series.rows;
    const double m0 = rows.front()[1];
    double spurious = 0.0;
    for (const auto& row : run.spurious.rows) spurious = std::max(spurious, std::abs(row[1]));
    metrics["transport_steps"] = run.transport->steps;
    metrics["transport_steady"] = run.transport->steady;
    metrics["initial_total"] = m0;
    metrics["final_total"] = rows.back()[1];
    metrics["max_spurious_mass"] = spurious;
    if (m0 != 0.0) metrics["max_spurious_mass_relative"] = spurious / std::abs(m0);
    if (!segment.empty()) {
      std::vector<double> t, l;
      for (const auto& row : run.leak.rows) {
        t.push_back(row[0]);
        l.push_back(row[1]);
      }
      run.plateau = detect_plateau(t, l);
      metrics["steady_leak_rate"] = run.plateau->value;
      metrics["plateau_detected"] = run.plateau->detected;
      metrics["plateau_time"] = run.plateau->time;
    }
  }

  for (const auto& [name, threshold] : spec.thresholds) {
    if (name == "local_balance") {
      if (formulation == Formulation::rt0) {
        run.checks.push_back(at_most(name, metrics["local_balance"].get<double>(), threshold));
      }
    } else if (name == "global_balance") {
      run.checks.push_back(at_most(name, metrics["global_balance"].get<double>(), threshold));
    } else if (name == "centerline_velocity") {
      if (formulation == Formulation::rt0 && metrics.contains("centerline_max_relative_deviation")) {
        run.checks.push_back(
            at_most(name, metrics["centerline_max_relative_deviation"].get<double>(), threshold));
      }
    } else if (name == "spurious_mass") {
      if (metrics.contains("max_spurious_mass_relative")) {
        run.checks.push_back(at_most(name, metrics["max_spurious_mass_relative"].get<double>(), threshold));
      }
    }
  }

  const ConvergenceReport& report = flow.report();
  run.summary = {{"benchmark", spec.name},
                 {"formulation", std::string(to_string(formulation))},
                 {"mesh", {{"nodes", mesh.num_nodes()}, {"edges", mesh.num_edges()}, {"triangles", mesh.num_triangles()}}},
                 {"unknowns", dof_counts(mesh, formulation)},
                 {"picard_iterations", report.iterations},
                 {"picard_updates", report.update_history},
                 {"final_residual", report.final_residual},
                 {"initial_rhs_norm", report.initial_rhs_norm},
                 {"metrics", metrics},
                 {"checks", checks_json(run.checks)},
                 {"passed", run.passed()}};
  if (!options.output_dir.empty()) write_outputs(run, options.output_dir);
  return run;
}

double mass_discrepancy(const TransientResult& a, const TransientResult& b) {
  const auto& ra = a.series.rows;
  const auto& rb = b.series.rows;
  if (ra.empty() || rb.empty()) throw InvalidArgument("empty concentration series");
  const double m0 = std::abs(ra.front()[1]);
  if (m0 == 0.0) throw InvalidArgument("initial concentration total is zero");
  double worst = 0.0;
  const std::size_t n = std::max(ra.size(), rb.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = ra[std::min(i, ra.size() - 1)][1];
    const double mb = rb[std::min(i, rb.size() - 1)][1];
    worst = std::max(worst, std::abs(ma - mb) / m0);
  }
  return worst;
}

CylinderSweep cylinder_sweep(const std::vector<double>& k2_values, const RunOptions& options,
                             double max_discrepancy, double rt0_noise, int mesh_scale) {
  CylinderSweep sweep;
  json rows = json::array();
  for (double k2 : k2_values) {
    BenchmarkSpec spec = cylinder_inclusion(k2);
    spec.mesh.scale = mesh_scale;
    RunOptions sub = options;
    const std::string tag = "k2_" + format_double(k2);
    if (!options.output_dir.empty()) sub.output_dir = options.output_dir + "/" + tag + "_rt0";
    const BenchmarkRun rt0 = run_benchmark(spec, Formulation::rt0, sub);
    if (!options.output_dir.empty()) sub.output_dir = options.output_dir + "/" + tag + "_vms";
    const BenchmarkRun vms = run_benchmark(spec, Formulation::vms, sub);
    CylinderSweepRow row;
    row.k2 = k2;
    row.discrepancy = mass_discrepancy(*rt0.transport, *vms.transport);
    row.rt0_spurious = rt0.summary["metrics"]["max_spurious_mass_relative"].get<double>();
    row.vms_spurious = vms.summary["metrics"]["max_spurious_mass_relative"].get<double>();
    row.vms_global_balance = vms.summary["metrics"]["global_balance"].get<double>();
    sweep.rows.push_back(row);
    sweep.checks.push_back(at_most("discrepancy k2=" + format_double(k2), row.discrepancy, max_discrepancy));
    sweep.checks.push_back(at_most("rt0 spurious mass k2=" + format_double(k2), row.rt0_spurious, rt0_noise));
    rows.push_back({{"k2", k2},
                    {"discrepancy", row.discrepancy},
                    {"rt0_spurious_relative", row.rt0_spurious},
                    {"vms_spurious_relative", row.vms_spurious},
                    {"vms_global_balance", row.vms_global_balance}});
  }
  sweep.summary = {{"study", "cylinder_sweep"}, {"rows", rows}, {"checks", checks_json(sweep.checks)},
                   {"passed", sweep.passed()}};
  if (!options.output_dir.empty()) {
    Series s{{"k2", "discrepancy", "rt0_spurious_relative", "vms_spurious_relative"}, {}};
    for (const auto& r : sweep.rows) s.add_row({r.k2, r.discrepancy, r.rt0_spurious, r.vms_spurious});
    write_series(s, options.output_dir + "/sweep.csv");
    write_text(options.output_dir + "/summary.json", sweep.summary.dump(2) + "\n");
  }
  return sweep;
}

LeakyWellStudy leaky_well_study(const std::vector<double>& betas, const RunOptions& options,
                                double gap_target, double gap_tolerance, int mesh_scale) {
  if (betas.empty()) throw InvalidArgument("leaky well study needs at least one beta");
  LeakyWellStudy study;
  json rows = json::array();
  for (double beta : betas) {
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      BenchmarkSpec spec = leaky_well(beta);
      spec.mesh.scale = mesh_scale;
      RunOptions sub = options;
      if (!options.output_dir.empty()) {
        sub.output_dir = options.output_dir + "/beta_" + format_double(beta) + "_" + std::string(to_string(f));
      }
      const BenchmarkRun run = run_benchmark(spec, f, sub);
      LeakyWellRow row;
      row.beta = beta;
      row.formulation = f;
      row.steady_leak = run.plateau->value;
      row.plateau = run.plateau->detected;
      row.plateau_time = run.plateau->time;
      row.picard_iterations = run.flow->report().iterations;
      row.global_balance = run.summary["metrics"]["global_balance"].get<double>();
      study.rows.push_back(row);
      rows.push_back({{"beta", beta},
                      {"formulation", std::string(to_string(f))},
                      {"steady_leak_rate", row.steady_leak},
                      {"plateau_detected", row.plateau},
                      {"plateau_time", row.plateau_time},
                      {"picard_iterations", row.picard_iterations},
                      {"global_balance", row.global_balance}});
    }
  }
  auto leak = [&](std::size_t beta_index, Formulation f) {
    return study.rows[2 * beta_index + (f == Formulation::vms ? 1 : 0)].steady_leak;
  };
  const double rt0 = leak(0, Formulation::rt0), vms = leak(0, Formulation::vms);
  study.gap = 1.0 - vms / rt0;
  study.checks.push_back({"vms leak below rt0", vms / rt0, 1.0, vms < rt0});
  study.checks.push_back({"gap within target", std::abs(study.gap - gap_target), gap_tolerance,
                          std::abs(study.gap - gap_target) <= gap_tolerance});
  for (Formulation f : {Formulation::rt0, Formulation::vms}) {
    bool decreasing = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < betas.size(); ++i) {
      decreasing = decreasing && leak(i, f) < leak(i - 1, f);
      worst_ratio = std::max(worst_ratio, leak(i, f) / leak(i - 1, f));
    }
    study.checks.push_back({std::string(to_string(f)) + " leak decreasing in beta", worst_ratio, 1.0, decreasing});
  }
  for (const auto& r : study.rows) {
    study.checks.push_back({"plateau " + std::string(to_string(r.formulation)) + " beta=" + format_double(r.beta),
                            r.plateau ? 1.0 : 0.0, 1.0, r.plateau});
  }
  study.summary = {{"study", "leaky_well"}, {"rows", rows}, {"gap", study.gap},
                   {"checks", checks_json(study.checks)}, {"passed", study.passed()}};
  if (!options.output_dir.empty()) {
    write_text(options.output_dir + "/summary.json", study.summary.dump(2) + "\n");
  }
  return study;
}

ConvergenceStudy convergence_study(Formulation formulation, const std::vector<int>& cells,
                                   Execution execution) {
  using std::numbers::pi;
  ConvergenceStudy study;
  study.formulation = formulation;
  const auto pressure = [](Point p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  const auto velocity = [](Point p) {
    return Vec2{-pi * std::cos(pi * p.x) * std::sin(pi * p.y), -pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
  };
  const Rectangle box{{0, 0}, {1, 1}};
  std::vector<std::pair<double, double>> ev, ep;
  for (int n : cells) {
    FlowProblem problem;
    problem.mesh = std::make_shared<const Mesh>(mark_boundaries(generate_structured(n, n, box), box_sides(box)));
    problem.formulation = formulation;
    problem.materials.regions[0] = {1.0, 0.0};
    problem.materials.viscosity = ViscosityModel::constant(1.0);
    problem.source = [&](Point p) { return 2.0 * pi * pi * pressure(p); };
    for (const char* side : {"left", "right", "bottom", "top"}) {
      problem.boundary[side] = FlowBoundaryCondition::pressure([](Point) { return 0.0; });
    }
    FlowSolveOptions opt;
    opt.execution = execution;
    const FlowSolution s = solve_flow(problem, opt);
    const L2Errors e = l2_errors(s, velocity, pressure);
    const double h = 1.0 / n;
    study.rows.push_back({n, h, e.velocity, e.pressure});
    ev.emplace_back(h, e.velocity);
    ep.emplace_back(h, e.pressure);
  }
  study.velocity_rate = convergence_rate(ev);
  study.pressure_rate = convergence_rate(ep);
  auto within = [](std::string name, double value, double target, double tol) {
    return Check{std::move(name), std::abs(value - target), tol, std::abs(value - target) <= tol};
  };
  if (formulation == Formulation::rt0) {
    study.checks.push_back(within("velocity rate", study.velocity_rate, 1.0, 0.25));
    study.checks.push_back(within("pressure rate", study.pressure_rate, 1.0, 0.25));
  } else {
    study.checks.push_back(within("velocity rate", study.velocity_rate, 2.0, 0.3));
    study.checks.push_back({"pressure rate", study.pressure_rate, 0.75, study.pressure_rate >= 0.75});
  }
  json rows = json::array();
  for (const auto& r : study.rows) {
    rows.push_back({{"cells", r.cells}, {"h", r.h}, {"velocity_error", r.velocity_error},
                    {"pressure_error", r.pressure_error}});
  }
  study.summary = {{"study", "convergence"},
                   {"formulation", std::string(to_string(formulation))},
                   {"rows", rows},
                   {"velocity_rate", study.velocity_rate},
                   {"pressure_rate", study.pressure_rate},
                   {"checks", checks_json(study.checks)},
                   {"passed", study.passed()}};
  return study;
}

}  // namespace pfb
