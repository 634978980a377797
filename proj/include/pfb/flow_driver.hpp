#pragma once

#include <span>

#include "pfb/flow_problem.hpp"
#include "pfb/linalg.hpp"
#include "pfb/parallel.hpp"
#include "pfb/sparse_lu.hpp"

namespace pfb {

struct FlowSolveOptions {
  double picard_tolerance = 1e-9;  ///< on ||x_k - x_{k-1}||_2 / ||x_k||_2
  int max_picard_iterations = 50;  ///< Picard updates after the initial solve
  /// Under-relaxation of the Picard update; 1 is the plain fixed point.
  double relaxation = 1.0;
  Execution execution = Execution::parallel;
  LuOptions lu;
};

struct CompatibilityReport {
  bool checked = false;     ///< false when a pressure boundary exists
  double source_total = 0;  ///< integral of phi
  double boundary_flux = 0; ///< integral of psi over the boundary
  double violation = 0;     ///< |source_total - boundary_flux|
  double scale = 0;
};

/// For pure normal-velocity boundaries, verifies that the source integral equals
/// the prescribed outflux. Throws IncompatibleDataError when the difference
/// exceeds 1e-10 times the data scale.
CompatibilityReport check_compatibility(const FlowProblem& problem);

/// Assembles the linear system of the problem's formulation with mu evaluated
/// at the given element pressures (empty: reference viscosity).
SparseSystem assemble_flow(const FlowProblem& problem, std::span<const double> element_pressure = {},
                           Execution execution = Execution::parallel);

/// Single solve for beta == 0, otherwise Picard iteration on mu(p) started from
/// the constant-viscosity solution. Throws NonlinearDivergenceError after
/// max_picard_iterations without convergence.
FlowSolution solve_flow(const FlowProblem& problem, const FlowSolveOptions& options = {});

}  // namespace pfb
