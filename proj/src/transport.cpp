#include "pfb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfb/errors.hpp"

namespace pfb {

void TransportProblem::validate() const {
  if (!mesh) throw ConfigurationError("transport problem has no mesh");
  if (!(diffusivity > 0.0)) throw ConfigurationError("diffusivity must be positive");
  if (!(dt > 0.0)) throw ConfigurationError("time step must be positive");
  if (!(t_end >= 0.0)) throw ConfigurationError("end time must be non-negative");
  for (Index e : mesh->boundary_edges()) {
    const auto tag = mesh->boundary_tag(e);
    if (!tag) throw ConfigurationError("boundary edge " + std::to_string(e) + " has no tag");
    const auto it = boundary.find(*tag);
    if (it == boundary.end()) {
      throw ConfigurationError("no transport boundary condition for tag '" + std::string(*tag) + "'");
    }
    if (!it->second.value) {
      throw ConfigurationError("transport condition '" + std::string(*tag) + "' has no value");
    }
  }
}

std::vector<Index> TransportProblem::dirichlet_nodes() const {
  std::vector<char> flag(mesh->num_nodes(), 0);
  for (Index e : mesh->boundary_edges()) {
    const auto it = boundary.find(*mesh->boundary_tag(e));
    if (it->second.kind != TransportBoundaryCondition::Kind::dirichlet) continue;
    for (Index v : mesh->edge(e).nodes) flag[v] = 1;
  }
  std::vector<Index> nodes;
  for (Index v = 0; v < mesh->num_nodes(); ++v) {
    if (flag[v]) nodes.push_back(v);
  }
  return nodes;
}

namespace {

// Value prescribed at a Dirichlet node: the first Dirichlet edge (in edge
// order) touching it decides.
std::vector<double> dirichlet_values(const TransportProblem& problem,
                                     const std::vector<Index>& nodes) {
  const Mesh& mesh = *problem.mesh;
  std::vector<double> value(mesh.num_nodes(), std::numeric_limits<double>::quiet_NaN());
  for (Index e : mesh.boundary_edges()) {
    const auto& bc = problem.boundary.find(*mesh.boundary_tag(e))->second;
    if (bc.kind != TransportBoundaryCondition::Kind::dirichlet) continue;
    for (Index v : mesh.edge(e).nodes) {
      if (std::isnan(value[v])) value[v] = bc.value(mesh.node(v));
    }
  }
  std::vector<double> out;
  out.reserve(nodes.size());
  for (Index v : nodes) out.push_back(value[v]);
  return out;
}

}  // namespace

TransportElementMatrices element_matrices_transport(const TriangleGeometry& g, double diffusivity,
                                                    const std::array<Vec2, 3>& velocity) {
  TransportElementMatrices m;
  const double A = g.area;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      m.mass[a][b] = A * (a == b ? 2.0 : 1.0) / 12.0;
      m.diffusion[a][b] = diffusivity * A * dot(g.grad_lambda[a], g.grad_lambda[b]);
      double adv = 0.0;
      for (int q = 0; q < 3; ++q) {
        adv += kMidpointRule[q].weight * kMidpointRule[q].lambda[a] * dot(velocity[q], g.grad_lambda[b]);
      }
      m.advection[a][b] = A * adv;
    }
  }
  return m;
}

namespace {

TransportElementMatrices local_transport(const TransportProblem& problem, const FlowSolution& flow,
                                         Index t) {
  const TriangleGeometry g = problem.mesh->geometry(t);
  std::array<Vec2, 3> v;
  for (int q = 0; q < 3; ++q) v[q] = flow.velocity(t, interpolate(g.vertex, kMidpointRule[q].lambda));
  return element_matrices_transport(g, problem.diffusivity, v);
}

struct TransportBuffers {
  TripletBuffer mass, advection, diffusion;
};

void scatter_transport(const Mesh& mesh, Index t, const TransportElementMatrices& m,
                       TransportBuffers& buffers) {
  const auto& v = mesh.triangle(t).vertices;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      buffers.mass.add(v[a], v[b], m.mass[a][b]);
      buffers.advection.add(v[a], v[b], m.advection[a][b]);
      buffers.diffusion.add(v[a], v[b], m.diffusion[a][b]);
    }
  }
}

TransportMatrices finish_transport(const Mesh& mesh, const TransportBuffers& buffers) {
  const Index n = mesh.num_nodes();
  return {compress(buffers.mass, n), compress(buffers.advection, n), compress(buffers.diffusion, n)};
}

void check_velocity_mesh(const TransportProblem& problem, const FlowSolution& velocity) {
  problem.validate();
  if (&velocity.mesh() != problem.mesh.get() && !(velocity.mesh() == *problem.mesh)) {
    throw InvalidArgument("velocity and transport problem are on different meshes");
  }
}

}  // namespace

TransportMatrices assemble_transport(const TransportProblem& problem, const FlowSolution& velocity,
                                     Execution execution) {
  check_velocity_mesh(problem, velocity);
  const Mesh& mesh = *problem.mesh;
  std::vector<TransportElementMatrices> locals(mesh.num_triangles());
  for_each_index(mesh.num_triangles(), execution,
                 [&](Index t) { locals[t] = local_transport(problem, velocity, t); });
  TransportBuffers buffers;
  for (Index t = 0; t < mesh.num_triangles(); ++t) scatter_transport(mesh, t, locals[t], buffers);
  return finish_transport(mesh, buffers);
}

TransportMatrices assemble_transport_serial(const TransportProblem& problem,
                                            const FlowSolution& velocity) {
  check_velocity_mesh(problem, velocity);
  const Mesh& mesh = *problem.mesh;
  TransportBuffers buffers;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    scatter_transport(mesh, t, local_transport(problem, velocity, t), buffers);
  }
  return finish_transport(mesh, buffers);
}

std::vector<double> transport_load(const TransportProblem& problem, double time) {
  const Mesh& mesh = *problem.mesh;
  std::vector<double> f(mesh.num_nodes(), 0.0);
  if (problem.source) {
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const TriangleGeometry g = mesh.geometry(t);
      const auto& v = mesh.triangle(t).vertices;
      for (const BaryPoint& q : dunavant7()) {
        const double s = q.weight * g.area * problem.source(interpolate(g.vertex, q.lambda), time);
        for (int a = 0; a < 3; ++a) f[v[a]] += q.lambda[a] * s;
      }
    }
  }
  for (Index e : mesh.boundary_edges()) {
    const auto& bc = problem.boundary.find(*mesh.boundary_tag(e))->second;
    if (bc.kind != TransportBoundaryCondition::Kind::flux) continue;
    const Index a = mesh.edge(e).nodes[0], b = mesh.edge(e).nodes[1];
    const Point pa = mesh.node(a), pb = mesh.node(b);
    const double len = mesh.length(e);
    for (int q = 0; q < 2; ++q) {
      const double s = kGauss2Abscissa[q];
      const double w = kGauss2Weight[q] * len * bc.value(pa + s * (pb - pa));
      f[a] += (1.0 - s) * w;
      f[b] += s * w;
    }
  }
  return f;
}

TransportState initial_state(const TransportProblem& problem) {
  problem.validate();
  const Mesh& mesh = *problem.mesh;
  TransportState state;
  state.c.assign(mesh.num_nodes(), 0.0);
  if (problem.initial) {
    for (Index v = 0; v < mesh.num_nodes(); ++v) state.c[v] = problem.initial(mesh.node(v));
  }
  const auto nodes = problem.dirichlet_nodes();
  const auto values = dirichlet_values(problem, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) state.c[nodes[i]] = values[i];
  return state;
}

BackwardEulerStepper::BackwardEulerStepper(const TransportProblem& problem,
                                           TransportMatrices matrices)
    : problem_(&problem), matrices_(std::move(matrices)) {
  problem.validate();
  const Index n = problem.mesh->num_nodes();
  dirichlet_ = problem.dirichlet_nodes();
  dirichlet_values_ = dirichlet_values(problem, dirichlet_);
  std::vector<char> fixed(n, 0);
  for (Index v : dirichlet_) fixed[v] = 1;

  TripletBuffer buffer;
  const double dt = problem.dt;
  auto add = [&](const CsrMatrix& m, double scale) {
    for (Index r = 0; r < n; ++r) {
      if (fixed[r]) continue;
      for (Index p = m.row_ptr[r]; p < m.row_ptr[r + 1]; ++p) buffer.add(r, m.col[p], scale * m.val[p]);
    }
  };
  add(matrices_.mass, 1.0);
  add(matrices_.advection, dt);
  add(matrices_.diffusion, dt);
  for (Index v : dirichlet_) buffer.add(v, v, 1.0);
  lu_.emplace(compress(buffer, n));

  has_load_ = static_cast<bool>(problem.source);
  for (const auto& [tag, bc] : problem.boundary) {
    if (bc.kind == TransportBoundaryCondition::Kind::flux) has_load_ = true;
  }
}

TransportState BackwardEulerStepper::step(const TransportState& state) const {
  const TransportProblem& problem = *problem_;
  TransportState next;
  next.time = state.time + problem.dt;
  next.c = matrices_.mass.multiply(state.c);
  if (has_load_) {
    const auto f = transport_load(problem, next.time);
    for (std::size_t i = 0; i < f.size(); ++i) next.c[i] += problem.dt * f[i];
  }
  for (std::size_t i = 0; i < dirichlet_.size(); ++i) next.c[dirichlet_[i]] = dirichlet_values_[i];
  lu_->solve_in_place(next.c);
  for (std::size_t i = 0; i < dirichlet_.size(); ++i) next.c[dirichlet_[i]] = dirichlet_values_[i];
  return next;
}

TransportState step_backward_euler(const TransportProblem& problem, const TransportState& state,
                                   const TransportMatrices& matrices) {
  return BackwardEulerStepper(problem, matrices).step(state);
}

double total_concentration(const Mesh& mesh, std::span<const double> c) {
  double total = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t).vertices;
    total += mesh.geometry(t).area * (c[v[0]] + c[v[1]] + c[v[2]]) / 3.0;
  }
  return total;
}

int step_count(double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  // Ratios like 1.0 / 0.01 land a few ulps above an integer.
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, rounded)) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(ratio));
}

namespace {

struct ProbeSampler {
  std::vector<Index> triangle;
  std::vector<std::array<double, 3>> lambda;

  ProbeSampler(const Mesh& mesh, const std::vector<Probe>& probes) {
    PointLocator locator(mesh);
    for (const Probe& p : probes) {
      const Index t = locator.locate(p.at);
      if (t == kNoIndex) throw InvalidArgument("probe '" + p.name + "' lies outside the mesh");
      triangle.push_back(t);
      lambda.push_back(barycentric(mesh.geometry(t), p.at));
    }
  }

  double sample(const Mesh& mesh, std::span<const double> c, std::size_t i) const {
    const auto& v = mesh.triangle(triangle[i]).vertices;
    return lambda[i][0] * c[v[0]] + lambda[i][1] * c[v[1]] + lambda[i][2] * c[v[2]];
  }
};

}  // namespace

TransientResult run_transient(const TransportProblem& problem, const FlowSolution& velocity,
                              const TransientOptions& options) {
  const Mesh& mesh = *problem.mesh;
  BackwardEulerStepper stepper(problem, assemble_transport(problem, velocity, options.execution));
  const ProbeSampler sampler(mesh, options.probes);

  TransientResult result;
  result.series.columns = {"time", "total", "min", "max"};
  for (const Probe& p : options.probes) result.series.columns.push_back(p.name);
  auto record = [&](int step, const TransportState& s) {
    const auto [lo, hi] = std::minmax_element(s.c.begin(), s.c.end());
    std::vector<double> row{s.time, total_concentration(mesh, s.c), *lo, *hi};
    for (std::size_t i = 0; i < options.probes.size(); ++i) row.push_back(sampler.sample(mesh, s.c, i));
    result.series.add_row(std::move(row));
    if (options.observer) options.observer(step, s);
  };

  TransportState state = initial_state(problem);
  record(0, state);
  result.snapshots.push_back(state);
  const int total_steps = step_count(problem.t_end, problem.dt);
  for (int n = 1; n <= total_steps; ++n) {
    TransportState next = stepper.step(state);
    double change = 0.0;
    for (std::size_t i = 0; i < next.c.size(); ++i) {
      change = std::max(change, std::abs(next.c[i] - state.c[i]));
    }
    if (!std::isfinite(change)) throw Error("transport step produced non-finite concentrations");
    state = std::move(next);
    result.steps = n;
    record(n, state);
    const bool steady = change < options.steady_tolerance;
    if (options.snapshot_every > 0 && n % options.snapshot_every == 0) {
      result.snapshots.push_back(state);
    } else if (steady || n == total_steps) {
      result.snapshots.push_back(state);
    }
    if (steady) {
      result.steady = true;
      break;
    }
  }
  return result;
}

}  // namespace pfb
