#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfb/materials.hpp"
#include "pfb/mesh.hpp"

namespace pfb {

enum class Formulation { rt0, vms };

std::string_view to_string(Formulation f);
/// Accepts "rt0" and "vms"; throws InvalidArgument otherwise.
Formulation parse_formulation(std::string_view name);

using ScalarField = std::function<double(Point)>;

/// Condition on one tagged boundary segment: either the outward normal
/// velocity (Gamma_v) or the pressure (Gamma_p, imposed weakly).
struct FlowBoundaryCondition {
  enum class Kind { normal_velocity, pressure };
  Kind kind = Kind::normal_velocity;
  ScalarField value;

  static FlowBoundaryCondition velocity(ScalarField psi) {
    return {Kind::normal_velocity, std::move(psi)};
  }
  static FlowBoundaryCondition pressure(ScalarField p0) { return {Kind::pressure, std::move(p0)}; }
  static FlowBoundaryCondition no_flow() { return velocity([](Point) { return 0.0; }); }
};

struct FlowProblem {
  std::shared_ptr<const Mesh> mesh;
  MaterialField materials;
  ScalarField source;  ///< phi, volumetric flow rate; empty means zero
  std::map<std::string, FlowBoundaryCondition, std::less<>> boundary;
  Formulation formulation = Formulation::rt0;

  /// Throws ConfigurationError unless every boundary edge has a tag with a
  /// condition and every region has a material.
  void validate() const;
  bool has_pressure_boundary() const;
  /// Condition of a tagged boundary edge.
  const FlowBoundaryCondition& condition(Index edge) const;
  double source_at(Point p) const { return source ? source(p) : 0.0; }
};

/// Integral of phi over triangle t (7-point rule).
double element_source_integral(const FlowProblem& problem, Index t);

/// Integral of a scalar field along edge e (2-point Gauss).
double edge_integral(const Mesh& mesh, Index e, const ScalarField& f);

struct ConvergenceReport {
  int iterations = 0;                   ///< linear solves performed
  std::vector<double> update_history;   ///< relative DOF updates of Picard steps
  double final_residual = 0.0;          ///< ||A x - b||_2 at the returned solution
  double initial_rhs_norm = 0.0;        ///< ||b||_2 of the first assembled system
};

/// Discrete velocity and pressure of either formulation.
///
/// RT0 layout: one normal-velocity unknown per edge (along the edge's global
/// normal) followed by one pressure per triangle. VMS layout: (vx, vy, p) per
/// node, interleaved.
class FlowSolution {
 public:
  FlowSolution(Formulation formulation, std::shared_ptr<const Mesh> mesh,
               std::vector<double> dofs, ConvergenceReport report = {});

  Formulation formulation() const { return formulation_; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  std::span<const double> dofs() const { return dofs_; }
  const ConvergenceReport& report() const { return report_; }

  /// Velocity at a point of triangle t.
  Vec2 velocity(Index t, Point p) const;
  double pressure(Index t, Point p) const;
  /// Mean pressure over t (RT0: the element unknown; VMS: mean of the vertices).
  double mean_pressure(Index t) const;
  /// div v on t, which is constant per element for both formulations.
  double divergence(Index t) const;

  std::vector<double> element_mean_pressures() const;

 private:
  Formulation formulation_;
  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> dofs_;
  ConvergenceReport report_;
};

/// Number of unknowns: E + T for RT0, 3 N for VMS.
Index dof_count(const Mesh& mesh, Formulation formulation);

}  // namespace pfb
