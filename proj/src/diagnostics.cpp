#include "pfb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pfb/errors.hpp"

namespace pfb {

namespace {

double source_integral(const Mesh& mesh, Index t, const ScalarField& source) {
  if (!source) return 0.0;
  const auto v = mesh.vertices(t);
  double s = 0.0;
  for (const BaryPoint& q : dunavant7()) s += q.weight * source(interpolate(v, q.lambda));
  return s * mesh.geometry(t).area;
}

// Integral of v_K . n over local edge i of triangle t.
double edge_outflux(const FlowSolution& solution, const TriangleGeometry& g, Index t, int i) {
  const Point a = g.vertex[(i + 1) % 3], b = g.vertex[(i + 2) % 3];
  double s = 0.0;
  for (int q = 0; q < 2; ++q) {
    s += kGauss2Weight[q] * dot(solution.velocity(t, a + kGauss2Abscissa[q] * (b - a)), g.normal[i]);
  }
  return s * g.length[i];
}

}  // namespace

std::vector<double> boundary_fluxes(const FlowSolution& solution) {
  const Mesh& mesh = solution.mesh();
  std::vector<double> out;
  for (Index e : mesh.boundary_edges()) {
    const auto [t, i] = mesh.boundary_owner(e);
    out.push_back(edge_outflux(solution, mesh.geometry(t), t, i));
  }
  return out;
}

MassBalanceReport element_mass_balance(const FlowSolution& solution, const ScalarField& source) {
  const Mesh& mesh = solution.mesh();
  MassBalanceReport r;
  r.element.resize(mesh.num_triangles());
  r.element_normalized.resize(mesh.num_triangles());
  double total_source = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry g = mesh.geometry(t);
    double out = 0.0;
    for (int i = 0; i < 3; ++i) out += edge_outflux(solution, g, t, i);
    const double s = source_integral(mesh, t, source);
    total_source += s;
    r.flux_scale += std::abs(s);
    r.element[t] = out - s;
    r.element_normalized[t] = r.element[t] / g.area;
    r.sum_elements += r.element[t];
    r.max_abs = std::max(r.max_abs, std::abs(r.element[t]));
  }
  double boundary = 0.0;
  for (double f : boundary_fluxes(solution)) {
    boundary += f;
    r.flux_scale += std::abs(f);
  }
  r.global = boundary - total_source;

  std::vector<Index> order(mesh.num_triangles());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t keep = std::min<std::size_t>(10, order.size());
  std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](Index a, Index b) {
    const double da = std::abs(r.element[a]), db = std::abs(r.element[b]);
    return da != db ? da > db : a < b;
  });
  r.worst.assign(order.begin(), order.begin() + keep);
  return r;
}

double leak_rate(const TransportState& state, const FlowSolution& velocity,
                 std::span<const Index> segment) {
  const Mesh& mesh = velocity.mesh();
  double total = 0.0;
  for (Index e : segment) {
    const Edge& edge = mesh.edge(e);
    const Index t = edge.triangles[0];
    const Point a = mesh.node(edge.nodes[0]), b = mesh.node(edge.nodes[1]);
    const double ca = state.c[edge.nodes[0]], cb = state.c[edge.nodes[1]];
    double s = 0.0;
    for (int q = 0; q < 2; ++q) {
      const double x = kGauss2Abscissa[q];
      const double c = (1.0 - x) * ca + x * cb;
      s += kGauss2Weight[q] * c * velocity.velocity(t, a + x * (b - a)).y;
    }
    total += s * mesh.length(e);
  }
  return total;
}

L2Errors l2_errors(const FlowSolution& solution, const std::function<Vec2(Point)>& velocity,
                   const ScalarField& pressure) {
  const Mesh& mesh = solution.mesh();
  double ev = 0.0, ep = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry g = mesh.geometry(t);
    double sv = 0.0, sp = 0.0;
    for (const BaryPoint& q : dunavant7()) {
      const Point x = interpolate(g.vertex, q.lambda);
      const Vec2 dv = solution.velocity(t, x) - velocity(x);
      const double dp = solution.pressure(t, x) - pressure(x);
      sv += q.weight * dot(dv, dv);
      sp += q.weight * dp * dp;
    }
    ev += sv * g.area;
    ep += sp * g.area;
  }
  return {std::sqrt(ev), std::sqrt(ep)};
}

double convergence_rate(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw InvalidArgument("a convergence rate needs at least two samples");
  double sx = 0.0, sy = 0.0;
  for (const auto& [h, e] : samples) {
    if (!(h > 0.0) || !(e > 0.0)) throw InvalidArgument("mesh sizes and errors must be positive");
    sx += std::log(h);
    sy += std::log(e);
  }
  const double n = static_cast<double>(samples.size());
  const double mx = sx / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [h, e] : samples) {
    sxy += (std::log(h) - mx) * (std::log(e) - my);
    sxx += (std::log(h) - mx) * (std::log(h) - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("mesh sizes must differ");
  return sxy / sxx;
}

PlateauReport detect_plateau(std::span<const double> times, std::span<const double> values,
                             double rel_tol) {
  if (times.size() != values.size()) throw InvalidArgument("times and values differ in length");
  PlateauReport r;
  const std::size_t n = values.size();
  if (n < 3) return r;
  r.value = values.back();
  const double scale = std::abs(r.value);
  const std::size_t window = std::max<std::size_t>(3, n / 10);
  double lo = values.back(), hi = values.back();
  for (std::size_t i = n - window; i < n; ++i) {
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  r.detected = scale > 0.0 && hi - lo <= rel_tol * scale;
  std::size_t first = n - 1;
  while (first > 0 && std::abs(values[first - 1] - r.value) <= 1e-2 * scale) --first;
  r.time = times[first];
  return r;
}

Index dof_counts(const Mesh& mesh, Formulation formulation) { return dof_count(mesh, formulation); }

SpuriousMassMeter::SpuriousMassMeter(const FlowSolution& velocity, const ScalarField& source)
    : mesh_(&velocity.mesh()) {
  residual_.resize(mesh_->num_triangles());
  for (Index t = 0; t < mesh_->num_triangles(); ++t) {
    residual_[t] = velocity.divergence(t) - source_integral(*mesh_, t, source) / mesh_->geometry(t).area;
  }
}

double SpuriousMassMeter::rate(std::span<const double> c) const {
  double r = 0.0;
  for (Index t = 0; t < mesh_->num_triangles(); ++t) {
    const auto& v = mesh_->triangle(t).vertices;
    r += residual_[t] * mesh_->geometry(t).area * (c[v[0]] + c[v[1]] + c[v[2]]) / 3.0;
  }
  return r;
}

void SpuriousMassMeter::accumulate(std::span<const double> c, double dt) { total_ += dt * rate(c); }

}  // namespace pfb
