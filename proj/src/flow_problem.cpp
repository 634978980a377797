#include "pfb/flow_problem.hpp"

#include <string>

#include "pfb/errors.hpp"
#include "pfb/flow_rt0.hpp"
#include "pfb/flow_vms.hpp"

namespace pfb {

std::string_view to_string(Formulation f) { return f == Formulation::rt0 ? "rt0" : "vms"; }

Formulation parse_formulation(std::string_view name) {
  if (name == "rt0" || name == "RT0") return Formulation::rt0;
  if (name == "vms" || name == "VMS") return Formulation::vms;
  throw InvalidArgument("unknown formulation '" + std::string(name) + "' (expected rt0 or vms)");
}

void FlowProblem::validate() const {
  if (!mesh) throw ConfigurationError("flow problem has no mesh");
  materials.validate(*mesh);
  for (Index e = 0; e < mesh->num_edges(); ++e) {
    if (!mesh->edge(e).on_boundary()) continue;
    condition(e);
  }
  for (const auto& [tag, bc] : boundary) {
    if (!bc.value) throw ConfigurationError("boundary condition '" + tag + "' has no value");
  }
}

bool FlowProblem::has_pressure_boundary() const {
  for (Index e = 0; e < mesh->num_edges(); ++e) {
    if (mesh->edge(e).on_boundary() &&
        condition(e).kind == FlowBoundaryCondition::Kind::pressure) {
      return true;
    }
  }
  return false;
}

const FlowBoundaryCondition& FlowProblem::condition(Index edge) const {
  const auto tag = mesh->boundary_tag(edge);
  if (!tag) {
    throw ConfigurationError("boundary edge " + std::to_string(edge) + " has no tag");
  }
  const auto it = boundary.find(*tag);
  if (it == boundary.end()) {
    throw ConfigurationError("no flow boundary condition for tag '" + std::string(*tag) + "'");
  }
  return it->second;
}

double element_source_integral(const FlowProblem& problem, Index t) {
  if (!problem.source) return 0.0;
  const auto v = problem.mesh->vertices(t);
  const double area = problem.mesh->geometry(t).area;
  double s = 0.0;
  for (const BaryPoint& q : dunavant7()) s += q.weight * problem.source(interpolate(v, q.lambda));
  return s * area;
}

double edge_integral(const Mesh& mesh, Index e, const ScalarField& f) {
  const Point a = mesh.node(mesh.edge(e).nodes[0]);
  const Point b = mesh.node(mesh.edge(e).nodes[1]);
  double s = 0.0;
  for (int g = 0; g < 2; ++g) s += kGauss2Weight[g] * f(a + kGauss2Abscissa[g] * (b - a));
  return s * norm(b - a);
}

FlowSolution::FlowSolution(Formulation formulation, std::shared_ptr<const Mesh> mesh,
                           std::vector<double> dofs, ConvergenceReport report)
    : formulation_(formulation),
      mesh_(std::move(mesh)),
      dofs_(std::move(dofs)),
      report_(std::move(report)) {
  if (!mesh_) throw InvalidArgument("flow solution needs a mesh");
  if (dofs_.size() != static_cast<std::size_t>(dof_count(*mesh_, formulation_))) {
    throw InvalidArgument("flow solution has " + std::to_string(dofs_.size()) +
                          " unknowns, expected " +
                          std::to_string(dof_count(*mesh_, formulation_)));
  }
}

Vec2 FlowSolution::velocity(Index t, Point p) const {
  return formulation_ == Formulation::rt0 ? evaluate_velocity_rt0(*mesh_, dofs_, t, p)
                                          : evaluate_velocity_vms(*mesh_, dofs_, t, p);
}

double FlowSolution::pressure(Index t, Point p) const {
  if (formulation_ == Formulation::rt0) return dofs_[mesh_->num_edges() + t];
  const TriangleGeometry g = mesh_->geometry(t);
  const auto l = barycentric(g, p);
  const auto& v = mesh_->triangle(t).vertices;
  return l[0] * dofs_[3 * v[0] + 2] + l[1] * dofs_[3 * v[1] + 2] + l[2] * dofs_[3 * v[2] + 2];
}

double FlowSolution::mean_pressure(Index t) const {
  if (formulation_ == Formulation::rt0) return dofs_[mesh_->num_edges() + t];
  const auto& v = mesh_->triangle(t).vertices;
  return (dofs_[3 * v[0] + 2] + dofs_[3 * v[1] + 2] + dofs_[3 * v[2] + 2]) / 3.0;
}

double FlowSolution::divergence(Index t) const {
  const TriangleGeometry g = mesh_->geometry(t);
  const Triangle& tri = mesh_->triangle(t);
  double d = 0.0;
  if (formulation_ == Formulation::rt0) {
    for (int i = 0; i < 3; ++i) {
      d += dofs_[tri.edges[i]] * mesh_->edge_sign(t, i) * g.length[i];
    }
    return d / g.area;
  }
  for (int a = 0; a < 3; ++a) {
    d += dofs_[3 * tri.vertices[a]] * g.grad_lambda[a].x +
         dofs_[3 * tri.vertices[a] + 1] * g.grad_lambda[a].y;
  }
  return d;
}

std::vector<double> FlowSolution::element_mean_pressures() const {
  std::vector<double> p(mesh_->num_triangles());
  for (Index t = 0; t < mesh_->num_triangles(); ++t) p[t] = mean_pressure(t);
  return p;
}

Index dof_count(const Mesh& mesh, Formulation formulation) {
  return formulation == Formulation::rt0 ? mesh.num_edges() + mesh.num_triangles()
                                         : 3 * mesh.num_nodes();
}

}  // namespace pfb
