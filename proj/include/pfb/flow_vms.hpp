#pragma once

#include <array>
#include <span>

#include "pfb/flow_problem.hpp"
#include "pfb/linalg.hpp"
#include "pfb/parallel.hpp"

namespace pfb {

/// Local block of the equal-order variational multiscale form on one triangle.
/// Unknowns are ordered (vx, vy, p) per local vertex.
struct VmsElementMatrices {
  std::array<std::array<double, 9>, 9> matrix{};
  std::array<double, 9> rhs{};
};

/// Galerkin terms minus half the residual-weighted stabilization:
///   1/2 (w, (mu/k) v) - (div w, p) - 1/2 (w, grad p) - (q, div v) - 1/2 (grad q, v)
///   - 1/2 (grad q, (k/mu) grad p)
///   = 1/2 (w, rho b) - (q, phi) - 1/2 (grad q, (k/mu) rho b).
/// `source` holds the integrals of phi against the three vertex hat functions.
VmsElementMatrices element_matrices_vms(const TriangleGeometry& geometry, double mobility,
                                        Vec2 rho_b, const std::array<double, 3>& source = {});

/// How the velocity of a boundary node on Gamma_v is constrained.
struct VmsNodeConstraint {
  enum class Kind { free, normal, full };
  Kind kind = Kind::free;
  Vec2 normal;        ///< unit normal for Kind::normal
  double value = 0;   ///< prescribed normal velocity for Kind::normal
  Vec2 velocity;      ///< prescribed velocity for Kind::full
};

/// One constraint per node: a single normal direction is imposed through a
/// local rotation of the nodal velocity block; two non-parallel normals fix
/// both components.
std::vector<VmsNodeConstraint> vms_node_constraints(const FlowProblem& problem);

/// Global VMS system. Returned unknowns of nodes with a normal constraint are in
/// the rotated (normal, tangential) frame; recover_vms_velocity undoes it.
SparseSystem assemble_vms(const FlowProblem& problem, std::span<const double> element_pressure = {},
                          Execution execution = Execution::parallel);
SparseSystem assemble_vms_serial(const FlowProblem& problem,
                                 std::span<const double> element_pressure = {});

/// Converts rotated nodal velocity unknowns back to Cartesian components.
void recover_vms_velocity(const FlowProblem& problem, std::span<double> dofs);

/// Linear nodal interpolation on triangle t.
Vec2 evaluate_velocity_vms(const Mesh& mesh, std::span<const double> dofs, Index t, Point p);

}  // namespace pfb
