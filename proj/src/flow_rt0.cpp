#include "pfb/flow_rt0.hpp"

#include <algorithm>
#include <string>

#include "pfb/errors.hpp"

namespace pfb {

Vec2 rt0_basis(const TriangleGeometry& g, int sign, int i, Point p) {
  return (sign * g.length[i] / (2.0 * g.area)) * (p - g.vertex[i]);
}

Rt0ElementMatrices element_matrices_rt0(const TriangleGeometry& g, const std::array<int, 3>& signs,
                                        double mobility, Vec2 rho_b) {
  const double lmax = std::max({g.length[0], g.length[1], g.length[2]});
  if (!(g.area >= 1e-14 * lmax * lmax)) throw GeometryError("degenerate triangle");
  if (!(mobility > 0.0)) throw InvalidArgument("mobility must be positive");

  Rt0ElementMatrices m;
  const double resistivity = 1.0 / mobility;
  for (const BaryPoint& q : kMidpointRule) {
    const Point x = interpolate(g.vertex, q.lambda);
    std::array<Vec2, 3> psi;
    for (int i = 0; i < 3; ++i) psi[i] = rt0_basis(g, signs[i], i, x);
    const double w = q.weight * g.area;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m.mass[i][j] += w * resistivity * dot(psi[i], psi[j]);
      m.load[i] += w * dot(psi[i], rho_b);
    }
  }
  for (int i = 0; i < 3; ++i) m.divergence[i] = signs[i] * g.length[i];
  return m;
}

Rt0ElementMatrices element_matrices_rt0(const Mesh& mesh, Index t, double mobility, Vec2 rho_b) {
  return element_matrices_rt0(
      mesh.geometry(t), {mesh.edge_sign(t, 0), mesh.edge_sign(t, 1), mesh.edge_sign(t, 2)},
      mobility, rho_b);
}

namespace {

struct LocalRt0 {
  Rt0ElementMatrices blocks;
  double source = 0.0;
};

double element_mobility(const FlowProblem& problem, Index t, std::span<const double> pressure) {
  const Triangle& tri = problem.mesh->triangle(t);
  const double p = pressure.empty() ? 0.0 : pressure[t];
  return mobility_at(problem.materials, tri, p);
}

LocalRt0 local_rt0(const FlowProblem& problem, Index t, std::span<const double> pressure) {
  const Mesh& mesh = *problem.mesh;
  const RegionMaterial& mat = problem.materials.region(mesh.triangle(t).region);
  LocalRt0 local;
  local.blocks = element_matrices_rt0(mesh, t, element_mobility(problem, t, pressure),
                                      mat.density * problem.materials.body_force);
  local.source = element_source_integral(problem, t);
  return local;
}

void scatter_rt0(const Mesh& mesh, Index t, const LocalRt0& local, TripletBuffer& buffer,
                 std::vector<double>& rhs) {
  const auto& e = mesh.triangle(t).edges;
  const Index prow = mesh.num_edges() + t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) buffer.add(e[i], e[j], local.blocks.mass[i][j]);
    buffer.add(e[i], prow, -local.blocks.divergence[i]);
    buffer.add(prow, e[i], -local.blocks.divergence[i]);
    rhs[e[i]] += local.blocks.load[i];
  }
  rhs[prow] -= local.source;
}

SparseSystem finish_rt0(const FlowProblem& problem, TripletBuffer& buffer, std::vector<double> rhs) {
  const Mesh& mesh = *problem.mesh;
  std::vector<Index> fixed;
  std::vector<double> values;
  bool pressure_boundary = false;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).on_boundary()) continue;
    const auto [t, i] = mesh.boundary_owner(e);
    const int sign = mesh.edge_sign(t, i);
    const FlowBoundaryCondition& bc = problem.condition(e);
    if (bc.kind == FlowBoundaryCondition::Kind::pressure) {
      pressure_boundary = true;
      rhs[e] -= sign * edge_integral(mesh, e, bc.value);
    } else {
      fixed.push_back(e);
      values.push_back(sign * edge_integral(mesh, e, bc.value) / mesh.length(e));
    }
  }
  if (!pressure_boundary && mesh.num_triangles() > 0) {
    fixed.push_back(mesh.num_edges());
    values.push_back(0.0);
  }
  const Index n = dof_count(mesh, Formulation::rt0);
  SparseSystem system{compress(buffer, n), std::move(rhs)};
  constrain(system, fixed, values);
  return system;
}

void check_pressure_size(const FlowProblem& problem, std::span<const double> pressure) {
  if (!pressure.empty() && pressure.size() != static_cast<std::size_t>(problem.mesh->num_triangles())) {
    throw InvalidArgument("pressure iterate must have one value per triangle");
  }
}

}  // namespace

SparseSystem assemble_rt0(const FlowProblem& problem, std::span<const double> element_pressure,
                          Execution execution) {
  problem.validate();
  check_pressure_size(problem, element_pressure);
  const Mesh& mesh = *problem.mesh;
  std::vector<LocalRt0> locals(mesh.num_triangles());
  for_each_index(mesh.num_triangles(), execution, [&](Index t) {
    locals[t] = local_rt0(problem, t, element_pressure);
  });
  TripletBuffer buffer;
  buffer.reserve(15 * static_cast<std::size_t>(mesh.num_triangles()));
  std::vector<double> rhs(dof_count(mesh, Formulation::rt0), 0.0);
  for (Index t = 0; t < mesh.num_triangles(); ++t) scatter_rt0(mesh, t, locals[t], buffer, rhs);
  return finish_rt0(problem, buffer, std::move(rhs));
}

SparseSystem assemble_rt0_serial(const FlowProblem& problem,
                                 std::span<const double> element_pressure) {
  problem.validate();
  check_pressure_size(problem, element_pressure);
  const Mesh& mesh = *problem.mesh;
  TripletBuffer buffer;
  std::vector<double> rhs(dof_count(mesh, Formulation::rt0), 0.0);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    scatter_rt0(mesh, t, local_rt0(problem, t, element_pressure), buffer, rhs);
  }
  return finish_rt0(problem, buffer, std::move(rhs));
}

Vec2 evaluate_velocity_rt0(const Mesh& mesh, std::span<const double> dofs, Index t, Point p) {
  const TriangleGeometry g = mesh.geometry(t);
  const Triangle& tri = mesh.triangle(t);
  Vec2 v;
  for (int i = 0; i < 3; ++i) {
    v = v + dofs[tri.edges[i]] * rt0_basis(g, mesh.edge_sign(t, i), i, p);
  }
  return v;
}

std::vector<double> interpolate_rt0(const Mesh& mesh, const std::function<Vec2(Point)>& v) {
  std::vector<double> dofs(dof_count(mesh, Formulation::rt0), 0.0);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Vec2 n = mesh.global_normal(e);
    dofs[e] = edge_integral(mesh, e, [&](Point p) { return dot(v(p), n); }) / mesh.length(e);
  }
  return dofs;
}

}  // namespace pfb
