#pragma once

#include <array>
#include <span>

#include "pfb/flow_problem.hpp"
#include "pfb/linalg.hpp"
#include "pfb/parallel.hpp"

namespace pfb {

/// Element blocks of the lowest-order Raviart-Thomas mixed form on one triangle.
///
/// Basis i (edge i, opposite vertex p_i) is psi_i(x) = s_i * l_i / (2A) * (x - p_i),
/// so its normal component along the edge's global normal is 1 and
/// div psi_i = s_i * l_i / A.
struct Rt0ElementMatrices {
  std::array<std::array<double, 3>, 3> mass{};  ///< (psi_i, (mu/k) psi_j)
  std::array<double, 3> divergence{};           ///< integral of div psi_i = s_i * l_i
  std::array<double, 3> load{};                 ///< (psi_i, rho b)
};

/// Throws GeometryError for a degenerate triangle and InvalidArgument for a
/// non-positive mobility.
Rt0ElementMatrices element_matrices_rt0(const TriangleGeometry& geometry,
                                        const std::array<int, 3>& signs, double mobility,
                                        Vec2 rho_b = {});
Rt0ElementMatrices element_matrices_rt0(const Mesh& mesh, Index t, double mobility,
                                        Vec2 rho_b = {});

/// Value of basis function i of triangle t at a point.
Vec2 rt0_basis(const TriangleGeometry& geometry, int sign, int i, Point p);

/// Global saddle-point system [[M, -B^T], [-B, 0]] with Gamma_v fluxes imposed
/// strongly, Gamma_p pressures weakly, and the pressure datum of triangle 0
/// pinned when there is no pressure boundary. `element_pressure` (size T, or
/// empty for the reference viscosity) sets mu per element.
SparseSystem assemble_rt0(const FlowProblem& problem, std::span<const double> element_pressure = {},
                          Execution execution = Execution::parallel);

/// Serial reference assembly kept for verifying the OpenMP kernel.
SparseSystem assemble_rt0_serial(const FlowProblem& problem,
                                 std::span<const double> element_pressure = {});

/// Sum_i flux_i psi_i(p) on triangle t.
Vec2 evaluate_velocity_rt0(const Mesh& mesh, std::span<const double> dofs, Index t, Point p);

/// Edge unknowns reproducing a given velocity field: mean normal component along
/// each edge's global normal.
std::vector<double> interpolate_rt0(const Mesh& mesh, const std::function<Vec2(Point)>& v);

}  // namespace pfb
