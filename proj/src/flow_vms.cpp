#include "pfb/flow_vms.hpp"

#include <cmath>
#include <string>

#include "pfb/errors.hpp"

namespace pfb {

VmsElementMatrices element_matrices_vms(const TriangleGeometry& g, double mobility, Vec2 rho_b,
                                        const std::array<double, 3>& source) {
  if (!(g.area > 0.0)) throw GeometryError("degenerate triangle");
  if (!(mobility > 0.0)) throw InvalidArgument("mobility must be positive");

  VmsElementMatrices m;
  const double A = g.area;
  const double third = A / 3.0;
  auto grad = [&](int a, int i) { return i == 0 ? g.grad_lambda[a].x : g.grad_lambda[a].y; };
  const double rb[2] = {rho_b.x, rho_b.y};

  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double mass = A * (a == b ? 2.0 : 1.0) / 12.0;
      for (int i = 0; i < 2; ++i) {
        m.matrix[3 * a + i][3 * b + i] += 0.5 / mobility * mass;
        const double vp = -grad(a, i) * third - 0.5 * grad(b, i) * third;
        m.matrix[3 * a + i][3 * b + 2] += vp;
        m.matrix[3 * b + 2][3 * a + i] += vp;
      }
      m.matrix[3 * a + 2][3 * b + 2] += -0.5 * mobility * A * dot(g.grad_lambda[a], g.grad_lambda[b]);
    }
    for (int i = 0; i < 2; ++i) m.rhs[3 * a + i] += 0.5 * rb[i] * third;
    m.rhs[3 * a + 2] += -source[a] - 0.5 * mobility * A * dot(g.grad_lambda[a], rho_b);
  }
  return m;
}

std::vector<VmsNodeConstraint> vms_node_constraints(const FlowProblem& problem) {
  const Mesh& mesh = *problem.mesh;
  struct Entry {
    Vec2 normal;
    double value;
  };
  std::vector<std::vector<Entry>> entries(mesh.num_nodes());
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).on_boundary()) continue;
    const FlowBoundaryCondition& bc = problem.condition(e);
    if (bc.kind != FlowBoundaryCondition::Kind::normal_velocity) continue;
    const auto [t, i] = mesh.boundary_owner(e);
    const Vec2 n = mesh.geometry(t).normal[i];
    for (Index v : mesh.edge(e).nodes) entries[v].push_back({n, bc.value(mesh.node(v))});
  }

  std::vector<VmsNodeConstraint> out(mesh.num_nodes());
  for (Index v = 0; v < mesh.num_nodes(); ++v) {
    const auto& list = entries[v];
    if (list.empty()) continue;
    const Entry& first = list.front();
    const Entry* second = nullptr;
    for (const Entry& other : list) {
      if (std::abs(cross(first.normal, other.normal)) > 1e-10) {
        second = &other;
        break;
      }
    }
    VmsNodeConstraint& c = out[v];
    if (!second) {
      c.kind = VmsNodeConstraint::Kind::normal;
      c.normal = first.normal;
      c.value = first.value;
      continue;
    }
    // v . n1 = psi1, v . n2 = psi2
    const Vec2 n1 = first.normal, n2 = second->normal;
    const double det = cross(n1, n2);
    c.kind = VmsNodeConstraint::Kind::full;
    c.velocity = {(first.value * n2.y - second->value * n1.y) / det,
                  (n1.x * second->value - n2.x * first.value) / det};
  }
  return out;
}

namespace {

struct LocalVms {
  VmsElementMatrices blocks;
};

// Replaces the (vx, vy) rows and columns of local vertex a by (normal, tangential).
void rotate_vertex(VmsElementMatrices& m, int a, Vec2 n) {
  const Vec2 t{-n.y, n.x};
  const int x = 3 * a, y = 3 * a + 1;
  for (int col = 0; col < 9; ++col) {
    const double rx = m.matrix[x][col], ry = m.matrix[y][col];
    m.matrix[x][col] = n.x * rx + n.y * ry;
    m.matrix[y][col] = t.x * rx + t.y * ry;
  }
  for (int row = 0; row < 9; ++row) {
    const double cx = m.matrix[row][x], cy = m.matrix[row][y];
    m.matrix[row][x] = n.x * cx + n.y * cy;
    m.matrix[row][y] = t.x * cx + t.y * cy;
  }
  const double fx = m.rhs[x], fy = m.rhs[y];
  m.rhs[x] = n.x * fx + n.y * fy;
  m.rhs[y] = t.x * fx + t.y * fy;
}

std::array<double, 3> source_moments(const FlowProblem& problem, const TriangleGeometry& g) {
  std::array<double, 3> s{};
  if (!problem.source) return s;
  for (const BaryPoint& q : dunavant7()) {
    const double f = q.weight * g.area * problem.source(interpolate(g.vertex, q.lambda));
    for (int a = 0; a < 3; ++a) s[a] += q.lambda[a] * f;
  }
  return s;
}

LocalVms local_vms(const FlowProblem& problem, Index t, std::span<const double> pressure,
                   const std::vector<VmsNodeConstraint>& constraints) {
  const Mesh& mesh = *problem.mesh;
  const Triangle& tri = mesh.triangle(t);
  const TriangleGeometry g = mesh.geometry(t);
  const double mobility =
      mobility_at(problem.materials, tri, pressure.empty() ? 0.0 : pressure[t]);
  const Vec2 rho_b = problem.materials.region(tri.region).density * problem.materials.body_force;
  LocalVms local{element_matrices_vms(g, mobility, rho_b, source_moments(problem, g))};
  for (int a = 0; a < 3; ++a) {
    const VmsNodeConstraint& c = constraints[tri.vertices[a]];
    if (c.kind == VmsNodeConstraint::Kind::normal) rotate_vertex(local.blocks, a, c.normal);
  }
  return local;
}

void scatter_vms(const Mesh& mesh, Index t, const LocalVms& local, TripletBuffer& buffer,
                 std::vector<double>& rhs) {
  const auto& v = mesh.triangle(t).vertices;
  for (int r = 0; r < 9; ++r) {
    const Index row = 3 * v[r / 3] + r % 3;
    for (int c = 0; c < 9; ++c) {
      buffer.add(row, 3 * v[c / 3] + c % 3, local.blocks.matrix[r][c]);
    }
    rhs[row] += local.blocks.rhs[r];
  }
}

SparseSystem finish_vms(const FlowProblem& problem, const std::vector<VmsNodeConstraint>& constraints,
                        TripletBuffer& buffer, std::vector<double> rhs) {
  const Mesh& mesh = *problem.mesh;
  bool pressure_boundary = false;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).on_boundary()) continue;
    const FlowBoundaryCondition& bc = problem.condition(e);
    if (bc.kind != FlowBoundaryCondition::Kind::pressure) continue;
    pressure_boundary = true;
    const auto [t, i] = mesh.boundary_owner(e);
    const Vec2 n = mesh.geometry(t).normal[i];
    const Index a = mesh.edge(e).nodes[0], b = mesh.edge(e).nodes[1];
    const Point pa = mesh.node(a), pb = mesh.node(b);
    const double len = mesh.length(e);
    double ia = 0.0, ib = 0.0;
    for (int q = 0; q < 2; ++q) {
      const double s = kGauss2Abscissa[q];
      const double p0 = bc.value(pa + s * (pb - pa)) * kGauss2Weight[q] * len;
      ia += (1.0 - s) * p0;
      ib += s * p0;
    }
    for (const auto& [node, integral] : {std::pair{a, ia}, std::pair{b, ib}}) {
      Vec2 f = -integral * n;
      const VmsNodeConstraint& c = constraints[node];
      if (c.kind == VmsNodeConstraint::Kind::normal) {
        const Vec2 tangent{-c.normal.y, c.normal.x};
        f = {dot(c.normal, f), dot(tangent, f)};
      }
      rhs[3 * node] += f.x;
      rhs[3 * node + 1] += f.y;
    }
  }

  std::vector<Index> fixed;
  std::vector<double> values;
  for (Index v = 0; v < mesh.num_nodes(); ++v) {
    const VmsNodeConstraint& c = constraints[v];
    if (c.kind == VmsNodeConstraint::Kind::normal) {
      fixed.push_back(3 * v);
      values.push_back(c.value);
    } else if (c.kind == VmsNodeConstraint::Kind::full) {
      fixed.insert(fixed.end(), {3 * v, 3 * v + 1});
      values.insert(values.end(), {c.velocity.x, c.velocity.y});
    }
  }
  if (!pressure_boundary && mesh.num_nodes() > 0) {
    fixed.push_back(2);
    values.push_back(0.0);
  }
  SparseSystem system{compress(buffer, dof_count(mesh, Formulation::vms)), std::move(rhs)};
  constrain(system, fixed, values);
  return system;
}

void check_pressure_size(const FlowProblem& problem, std::span<const double> pressure) {
  if (!pressure.empty() && pressure.size() != static_cast<std::size_t>(problem.mesh->num_triangles())) {
    throw InvalidArgument("pressure iterate must have one value per triangle");
  }
}

}  // namespace

SparseSystem assemble_vms(const FlowProblem& problem, std::span<const double> element_pressure,
                          Execution execution) {
  problem.validate();
  check_pressure_size(problem, element_pressure);
  const Mesh& mesh = *problem.mesh;
  const auto constraints = vms_node_constraints(problem);
  std::vector<LocalVms> locals(mesh.num_triangles());
  for_each_index(mesh.num_triangles(), execution, [&](Index t) {
    locals[t] = local_vms(problem, t, element_pressure, constraints);
  });
  TripletBuffer buffer;
  buffer.reserve(81 * static_cast<std::size_t>(mesh.num_triangles()));
  std::vector<double> rhs(dof_count(mesh, Formulation::vms), 0.0);
  for (Index t = 0; t < mesh.num_triangles(); ++t) scatter_vms(mesh, t, locals[t], buffer, rhs);
  return finish_vms(problem, constraints, buffer, std::move(rhs));
}

SparseSystem assemble_vms_serial(const FlowProblem& problem,
                                 std::span<const double> element_pressure) {
  problem.validate();
  check_pressure_size(problem, element_pressure);
  const Mesh& mesh = *problem.mesh;
  const auto constraints = vms_node_constraints(problem);
  TripletBuffer buffer;
  std::vector<double> rhs(dof_count(mesh, Formulation::vms), 0.0);
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    scatter_vms(mesh, t, local_vms(problem, t, element_pressure, constraints), buffer, rhs);
  }
  return finish_vms(problem, constraints, buffer, std::move(rhs));
}

void recover_vms_velocity(const FlowProblem& problem, std::span<double> dofs) {
  const auto constraints = vms_node_constraints(problem);
  for (std::size_t v = 0; v < constraints.size(); ++v) {
    const VmsNodeConstraint& c = constraints[v];
    if (c.kind != VmsNodeConstraint::Kind::normal) continue;
    const Vec2 t{-c.normal.y, c.normal.x};
    const Vec2 vel = dofs[3 * v] * c.normal + dofs[3 * v + 1] * t;
    dofs[3 * v] = vel.x;
    dofs[3 * v + 1] = vel.y;
  }
}

Vec2 evaluate_velocity_vms(const Mesh& mesh, std::span<const double> dofs, Index t, Point p) {
  const auto l = barycentric(mesh.geometry(t), p);
  const auto& v = mesh.triangle(t).vertices;
  Vec2 out;
  for (int a = 0; a < 3; ++a) out = out + l[a] * Vec2{dofs[3 * v[a]], dofs[3 * v[a] + 1]};
  return out;
}

}  // namespace pfb
