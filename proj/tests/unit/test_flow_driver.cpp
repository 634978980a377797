#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pfb/errors.hpp"
#include "pfb/flow_driver.hpp"

using namespace pfb;

namespace {

// RK4 march of p' = -q mu0 exp(beta p) / k from p(0) = 1; returns samples on [0, 1].
std::vector<double> march(double q, double beta, int n) {
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  const double h = 1.0 / n;
  const auto f = [&](double x) { return -q * std::exp(beta * x); };
  for (int i = 0; i < n; ++i) {
    const double k1 = f(p[i]), k2 = f(p[i] + 0.5 * h * k1), k3 = f(p[i] + 0.5 * h * k2), k4 = f(p[i] + h * k3);
    p[i + 1] = p[i] + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return p;
}

// Shooting on the flux so that p(1) = 0.
double shoot(double beta, int n) {
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (march(mid, beta, n).back() > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FlowProblem column(int nx, double beta, Formulation f) {
  const Rectangle box{{0, 0}, {1, 0.02}};
  FlowProblem p;
  p.mesh = std::make_shared<const Mesh>(mark_boundaries(generate_structured(nx, 1, box), box_sides(box)));
  p.formulation = f;
  p.materials.regions[0] = {1.0, 1.0};
  p.materials.viscosity = ViscosityModel::barus(1.0, beta);
  p.boundary["left"] = FlowBoundaryCondition::pressure([](Point) { return 1.0; });
  p.boundary["right"] = FlowBoundaryCondition::pressure([](Point) { return 0.0; });
  p.boundary["top"] = FlowBoundaryCondition::no_flow();
  p.boundary["bottom"] = FlowBoundaryCondition::no_flow();
  return p;
}

FlowProblem closed_box(Formulation f, double source, double outflow) {
  FlowProblem p = test::linear_pressure_problem(test::unit_mesh(4), f);
  p.source = [source](Point) { return source; };
  for (const char* side : {"left", "right", "bottom", "top"}) {
    p.boundary[side] = FlowBoundaryCondition::velocity([outflow](Point) { return outflow; });
  }
  return p;
}

}  // namespace

TEST_SUITE("flow_driver") {
  TEST_CASE("Barus column matches a shooting oracle") {
    const double beta = 1.0;
    const int n = 20000;
    const double q = shoot(beta, n);
    const auto profile = march(q, beta, n);
    const auto exact = [&](double x) {
      const double s = x * n;
      const int i = std::min(n - 1, static_cast<int>(s));
      return profile[i] + (s - i) * (profile[i + 1] - profile[i]);
    };
    CHECK(q == doctest::Approx((1.0 - std::exp(-beta)) / beta).epsilon(1e-10));
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      CAPTURE(to_string(f));
      const FlowSolution s = solve_flow(column(800, beta, f));
      CHECK(s.report().iterations > 1);
      double ep = 0.0, ev = 0.0;
      for (Index t = 0; t < s.mesh().num_triangles(); ++t) {
        const Point c = s.mesh().centroid(t);
        ep = std::max(ep, std::abs(s.pressure(t, c) - exact(c.x)));
        ev = std::max(ev, std::abs(s.velocity(t, c).x - q) / q);
      }
      CHECK(ep <= 1e-6);
      CHECK(ev <= (f == Formulation::rt0 ? 1e-6 : 1e-3));
    }
  }

  TEST_CASE("Picard stops on the update tolerance with a small final residual") {
    const FlowSolution s = solve_flow(column(50, 2.0, Formulation::rt0));
    const auto& r = s.report();
    REQUIRE(!r.update_history.empty());
    CHECK(r.update_history.back() <= 1e-9);
    CHECK(r.final_residual <= 1e-9 * r.initial_rhs_norm);
    CHECK(static_cast<int>(r.update_history.size()) + 1 == r.iterations);
  }

  TEST_CASE("constant viscosity takes exactly one solve") {
    const FlowSolution s = solve_flow(column(10, 0.0, Formulation::vms));
    CHECK(s.report().iterations == 1);
    CHECK(s.report().update_history.empty());
  }

  TEST_CASE("non-convergence is reported with the history") {
    FlowSolveOptions opt;
    opt.max_picard_iterations = 3;
    try {
      solve_flow(column(20, 3.0, Formulation::rt0), opt);
      FAIL("expected NonlinearDivergenceError");
    } catch (const NonlinearDivergenceError& e) {
      CHECK(e.history().size() == 3);
    }
  }

  TEST_CASE("compatibility of pure velocity data") {
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      CAPTURE(to_string(f));
      const auto zero = check_compatibility(closed_box(f, 0.0, 0.0));
      CHECK(zero.checked);
      CHECK(zero.violation == 0.0);
      // phi = 1 over the unit square leaves through four unit sides at 0.25 each.
      const FlowProblem balanced = closed_box(f, 1.0, 0.25);
      CHECK(check_compatibility(balanced).violation <= 1e-14);
      const FlowSolution s = solve_flow(balanced);
      CHECK(std::isfinite(s.dofs()[0]));
      const FlowProblem bad = closed_box(f, 1.0, 0.0);
      CHECK_THROWS_AS(check_compatibility(bad), IncompatibleDataError);
      CHECK_THROWS_AS(solve_flow(bad), IncompatibleDataError);
    }
    CHECK_FALSE(check_compatibility(test::linear_pressure_problem(test::unit_mesh(2), Formulation::rt0)).checked);
  }

  TEST_CASE("invalid problems are rejected before solving") {
    FlowProblem p = test::linear_pressure_problem(test::unit_mesh(2), Formulation::rt0);
    p.boundary.erase("top");
    CHECK_THROWS_AS(solve_flow(p), ConfigurationError);
    FlowProblem q = test::linear_pressure_problem(test::unit_mesh(2), Formulation::vms);
    q.materials.regions.clear();
    CHECK_THROWS_AS(solve_flow(q), ConfigurationError);
  }

  TEST_CASE("relabeling nodes does not change the fields") {
    const auto mesh = test::unit_mesh(6);
    std::vector<Index> perm(mesh->num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(5));
    const auto shuffled = std::make_shared<const Mesh>(permute_nodes(*mesh, perm));
    for (Formulation f : {Formulation::rt0, Formulation::vms}) {
      CAPTURE(to_string(f));
      FlowProblem a = test::linear_pressure_problem(mesh, f);
      a.source = [](Point x) { return std::sin(4 * x.x) + x.y; };
      a.materials.viscosity = ViscosityModel::barus(1.0, 0.5);
      a.boundary["top"] = FlowBoundaryCondition::pressure([](Point x) { return x.x * x.x; });
      FlowProblem b = a;
      b.mesh = shuffled;
      const FlowSolution sa = solve_flow(a), sb = solve_flow(b);
      const PointLocator la(*mesh), lb(*shuffled);
      std::mt19937 rng(9);
      std::uniform_real_distribution<double> u(0.01, 0.99);
      for (int k = 0; k < 50; ++k) {
        const Point x{u(rng), u(rng)};
        const Index ta = la.locate(x), tb = lb.locate(x);
        const Vec2 va = sa.velocity(ta, x), vb = sb.velocity(tb, x);
        CHECK(std::abs(va.x - vb.x) <= 1e-12 * (1 + std::abs(va.x)));
        CHECK(std::abs(va.y - vb.y) <= 1e-12 * (1 + std::abs(va.y)));
        CHECK(std::abs(sa.pressure(ta, x) - sb.pressure(tb, x)) <= 1e-12 * (1 + std::abs(sa.pressure(ta, x))));
      }
    }
  }
}
