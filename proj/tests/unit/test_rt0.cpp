#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "pfb/errors.hpp"
#include "pfb/flow_driver.hpp"
#include "pfb/flow_rt0.hpp"

using namespace pfb;

TEST_SUITE("rt0") {
  TEST_CASE("reference element matches exact monomial integrals") {
    const std::array<Point, 3> v{Point{0, 0}, Point{1, 0}, Point{0, 1}};
    const TriangleGeometry g = triangle_geometry(v);
    const double mobility = 0.25;
    const Vec2 rho_b{2.0, -3.0};
    const auto m = element_matrices_rt0(g, {1, 1, 1}, mobility, rho_b);
    // Over the reference triangle: |T| = 1/2, int x = int y = 1/6, int x^2 + y^2 = 1/6.
    const double area = 0.5, first = 1.0 / 6.0, second = 1.0 / 6.0;
    const std::array<double, 3> len{std::sqrt(2.0), 1.0, 1.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Point a = v[i], b = v[j];
        const double integral = second - (a.x + b.x) * first - (a.y + b.y) * first + dot(a, b) * area;
        const double expected = len[i] * len[j] / (4 * area * area) * integral / mobility;
        CHECK(std::abs(m.mass[i][j] - expected) <= 1e-12);
      }
      const double load = len[i] / (2 * area) * ((first - v[i].x * area) * rho_b.x + (first - v[i].y * area) * rho_b.y);
      CHECK(std::abs(m.load[i] - load) <= 1e-12);
      CHECK(m.divergence[i] == doctest::Approx(len[i]));
    }
  }

  TEST_CASE("basis normal components are 1 on their own edge and 0 elsewhere") {
    const TriangleGeometry g = triangle_geometry({Point{0.1, 0.2}, Point{1.3, 0.1}, Point{0.4, 0.9}});
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Point a = g.vertex[(j + 1) % 3], b = g.vertex[(j + 2) % 3];
        for (double s : {0.0, 0.3, 1.0}) {
          const double vn = dot(rt0_basis(g, 1, i, a + s * (b - a)), g.normal[j]);
          CHECK(std::abs(vn - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("element matrices: symmetry, sign flips, mobility scaling") {
    const TriangleGeometry g = triangle_geometry({Point{0, 0}, Point{2, 0.5}, Point{0.3, 1.1}});
    const auto a = element_matrices_rt0(g, {1, 1, 1}, 1.0);
    const auto b = element_matrices_rt0(g, {1, -1, 1}, 2.0);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(a.mass[i][j] == doctest::Approx(a.mass[j][i]));
        const double s = (i == 1 ? -1 : 1) * (j == 1 ? -1 : 1);
        CHECK(b.mass[i][j] == doctest::Approx(0.5 * s * a.mass[i][j]));
      }
    }
    CHECK_THROWS_AS(element_matrices_rt0(g, {1, 1, 1}, 0.0), InvalidArgument);
  }

  TEST_CASE("linear pressure is reproduced exactly") {
    const FlowProblem p = test::linear_pressure_problem(test::unit_mesh(6), Formulation::rt0);
    const FlowSolution s = solve_flow(p);
    const Mesh& mesh = s.mesh();
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
      const Point c = mesh.centroid(t);
      const Vec2 v = s.velocity(t, mesh.vertices(t)[0]);
      CHECK(std::abs(v.x - 1.0) <= 1e-12);
      CHECK(std::abs(v.y) <= 1e-12);
      CHECK(std::abs(s.mean_pressure(t) - (1.0 - c.x)) <= 1e-12);
      CHECK(std::abs(s.divergence(t)) <= 1e-12);
    }
    CHECK(s.report().iterations == 1);
  }

  TEST_CASE("interpolation reproduces linear fields") {
    const auto mesh = test::unit_mesh(4);
    const auto field = [](Point x) { return Vec2{1.0 + 2.0 * x.x, -3.0 + 2.0 * x.y}; };
    const auto dofs = interpolate_rt0(*mesh, field);
    for (Index t = 0; t < mesh->num_triangles(); ++t) {
      const Point c = mesh->centroid(t);
      const Vec2 v = evaluate_velocity_rt0(*mesh, dofs, t, c);
      CHECK(v.x == doctest::Approx(field(c).x).epsilon(1e-12));
      CHECK(v.y == doctest::Approx(field(c).y).epsilon(1e-12));
    }
  }

  TEST_CASE("serial and parallel assembly are bit-identical") {
    FlowProblem p = test::linear_pressure_problem(test::unit_mesh(12), Formulation::rt0);
    p.materials.viscosity = ViscosityModel::barus(1.0, 0.3);
    p.materials.body_force = {0.1, -1.0};
    p.source = [](Point x) { return std::sin(3 * x.x) * x.y; };
    std::vector<double> pressure(p.mesh->num_triangles());
    for (std::size_t i = 0; i < pressure.size(); ++i) pressure[i] = 0.01 * static_cast<double>(i % 17);
    const SparseSystem a = assemble_rt0_serial(p, pressure);
    const SparseSystem b = assemble_rt0(p, pressure, Execution::parallel);
    CHECK(a.matrix.row_ptr == b.matrix.row_ptr);
    CHECK(a.matrix.col == b.matrix.col);
    CHECK(a.matrix.val == b.matrix.val);
    CHECK(a.rhs == b.rhs);
    CHECK(dof_count(*p.mesh, Formulation::rt0) == a.size());
  }

  TEST_CASE("pure velocity boundary pins the pressure datum") {
    FlowProblem p = test::linear_pressure_problem(test::unit_mesh(4), Formulation::rt0);
    for (const char* side : {"left", "right"}) {
      p.boundary[side] = FlowBoundaryCondition::velocity([side](Point) {
        return std::string(side) == "left" ? -1.0 : 1.0;
      });
    }
    const FlowSolution s = solve_flow(p);
    CHECK(s.mean_pressure(0) == 0.0);
    for (Index t = 0; t < s.mesh().num_triangles(); ++t) {
      CHECK(s.velocity(t, s.mesh().centroid(t)).x == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
