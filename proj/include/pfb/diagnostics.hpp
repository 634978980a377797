#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pfb/flow_problem.hpp"
#include "pfb/transport.hpp"

namespace pfb {

struct MassBalanceReport {
  std::vector<double> element;             ///< outflux minus source, per triangle (m^2/s)
  std::vector<double> element_normalized;  ///< element value divided by the triangle area
  double global = 0.0;          ///< boundary outflux minus total source
  double sum_elements = 0.0;    ///< sum of the element values
  double max_abs = 0.0;
  /// Sum over boundary edges of |integral of v . n| plus sum over triangles of
  /// |integral of phi|.
  double flux_scale = 0.0;
  std::vector<Index> worst;     ///< up to ten triangles with the largest |element value|
};

/// Per element: integral over the element boundary of v . n (2-point Gauss per
/// edge, using that element's velocity) minus the integral of phi.
MassBalanceReport element_mass_balance(const FlowSolution& solution, const ScalarField& source = {});

/// Integral of v . n over each boundary edge (outward normal).
std::vector<double> boundary_fluxes(const FlowSolution& solution);

/// Integral of c v_y over the given edges, 2-point Gauss per edge. Each edge
/// takes the velocity of its first adjacent triangle.
double leak_rate(const TransportState& state, const FlowSolution& velocity,
                 std::span<const Index> segment);

struct L2Errors {
  double velocity = 0.0;
  double pressure = 0.0;
};

/// Seven-point quadrature of |v - v_exact|^2 and |p - p_exact|^2 per element.
L2Errors l2_errors(const FlowSolution& solution, const std::function<Vec2(Point)>& velocity,
                   const ScalarField& pressure);

/// Least-squares slope of log e against log h. Throws InvalidArgument for
/// fewer than two points or non-positive entries.
double convergence_rate(std::span<const std::pair<double, double>> samples);

/// E + T for RT0, 3 N for VMS.
Index dof_counts(const Mesh& mesh, Formulation formulation);

struct PlateauReport {
  bool detected = false;
  double value = 0.0;  ///< final value of the series
  double time = 0.0;   ///< first time after which the series stays within 1% of the final value
};

/// A series has reached a plateau when its values over the last tenth of the
/// samples (at least three) vary by no more than rel_tol times the final
/// magnitude.
PlateauReport detect_plateau(std::span<const double> times, std::span<const double> values,
                             double rel_tol = 1e-3);

/// Running integral of sum_K (div v - phi)_K * integral_K c: the mass that a
/// non-conservative velocity creates or destroys in the transport equation.
class SpuriousMassMeter {
 public:
  SpuriousMassMeter(const FlowSolution& velocity, const ScalarField& source = {});
  /// Rate at the given state.
  double rate(std::span<const double> c) const;
  /// Adds dt * rate(c) (backward rectangle).
  void accumulate(std::span<const double> c, double dt);
  double total() const { return total_; }

 private:
  const Mesh* mesh_;
  std::vector<double> residual_;  // (div v - phi) per element, per unit area
  double total_ = 0.0;
};

}  // namespace pfb
