#include "pfb/flow_driver.hpp"

#include <cmath>
#include <sstream>

#include "pfb/errors.hpp"
#include "pfb/flow_rt0.hpp"
#include "pfb/flow_vms.hpp"

namespace pfb {

CompatibilityReport check_compatibility(const FlowProblem& problem) {
  problem.validate();
  CompatibilityReport report;
  if (problem.has_pressure_boundary()) return report;
  report.checked = true;
  const Mesh& mesh = *problem.mesh;
  double magnitude = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const double s = element_source_integral(problem, t);
    report.source_total += s;
    magnitude += std::abs(s);
  }
  for (Index e : mesh.boundary_edges()) {
    const double f = edge_integral(mesh, e, problem.condition(e).value);
    report.boundary_flux += f;
    magnitude += std::abs(f);
  }
  report.violation = std::abs(report.source_total - report.boundary_flux);
  report.scale = magnitude;
  if (report.violation > 1e-10 * magnitude) {
    std::ostringstream msg;
    msg << "incompatible data: source integral " << report.source_total
        << " differs from boundary outflux " << report.boundary_flux;
    throw IncompatibleDataError(msg.str(), report.violation);
  }
  return report;
}

SparseSystem assemble_flow(const FlowProblem& problem, std::span<const double> element_pressure,
                           Execution execution) {
  return problem.formulation == Formulation::rt0
             ? assemble_rt0(problem, element_pressure, execution)
             : assemble_vms(problem, element_pressure, execution);
}

namespace {

struct LinearSolve {
  std::vector<double> x;
  double residual = 0.0;
  double rhs_norm = 0.0;
};

LinearSolve solve_once(const FlowProblem& problem, std::span<const double> pressure,
                       const FlowSolveOptions& options) {
  const SparseSystem system = assemble_flow(problem, pressure, options.execution);
  const SparseLu lu(system.matrix, options.lu);
  LinearSolve out;
  out.x = lu.solve(system.rhs);
  out.residual = residual_norm(system, out.x);
  out.rhs_norm = norm2(system.rhs);
  if (problem.formulation == Formulation::vms) recover_vms_velocity(problem, out.x);
  return out;
}

std::vector<double> element_pressures(const FlowProblem& problem, std::span<const double> x) {
  const Mesh& mesh = *problem.mesh;
  std::vector<double> p(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    if (problem.formulation == Formulation::rt0) {
      p[t] = x[mesh.num_edges() + t];
    } else {
      const auto& v = mesh.triangle(t).vertices;
      p[t] = (x[3 * v[0] + 2] + x[3 * v[1] + 2] + x[3 * v[2] + 2]) / 3.0;
    }
  }
  return p;
}

}  // namespace

FlowSolution solve_flow(const FlowProblem& problem, const FlowSolveOptions& options) {
  if (!(options.relaxation > 0.0 && options.relaxation <= 1.0)) {
    throw InvalidArgument("Picard relaxation must lie in (0, 1]");
  }
  if (options.max_picard_iterations < 1) throw InvalidArgument("max_picard_iterations must be >= 1");
  check_compatibility(problem);

  ConvergenceReport report;
  LinearSolve current = solve_once(problem, {}, options);
  report.iterations = 1;
  report.initial_rhs_norm = current.rhs_norm;
  report.final_residual = current.residual;
  if (!problem.materials.viscosity.pressure_dependent()) {
    return FlowSolution(problem.formulation, problem.mesh, std::move(current.x), std::move(report));
  }

  std::vector<double> x = std::move(current.x);
  for (int k = 0; k < options.max_picard_iterations; ++k) {
    const auto pressure = element_pressures(problem, x);
    LinearSolve next = solve_once(problem, pressure, options);
    ++report.iterations;
    double diff = 0.0, size = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      diff += (next.x[i] - x[i]) * (next.x[i] - x[i]);
      size += next.x[i] * next.x[i];
    }
    const double update = size > 0.0 ? std::sqrt(diff / size) : std::sqrt(diff);
    report.update_history.push_back(update);
    report.final_residual = next.residual;
    if (!std::isfinite(update)) break;
    if (update <= options.picard_tolerance) {
      return FlowSolution(problem.formulation, problem.mesh, std::move(next.x), std::move(report));
    }
    const double w = options.relaxation;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 - w) * x[i] + w * next.x[i];
  }
  throw NonlinearDivergenceError(
      "Picard iteration did not converge in " + std::to_string(options.max_picard_iterations) +
          " iterations",
      report.update_history);
}

}  // namespace pfb
